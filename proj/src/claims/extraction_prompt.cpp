#include "halprobe/claims/semantic.hpp"

#include "halprobe/errors.hpp"

namespace halprobe::claims {

const char* const kExtractionPromptVersion = "v1";

namespace {

constexpr const char* kInputMarker = "{{DESCRIPTION}}";

// Structured extraction prompt. The instruction block specifies the semantic
// categories, the question format (including the <multi> marker for counted
// objects), and a worked example of the expected JSON output.
const char* const kExtractionPrompt = R"PROMPT(# Extract key aspects of an image description and structure the output in JSON format, to assist in extracting our question. Because the description is too complex, I prefer to first extract the key aspects of the description to assist in extracting our questions.

# Requirement of key aspects:
-Content composition: The aspects I cared about were: knowledge and functionality (simple and short facts that are not specific to the image, i.e., general knowledege and statement), object quantity (Nouns such as people, animals, plants, and objects etc. that appear. #I only care about objects with specific values, not objects with unclear values #), relation between objects (Direct-contact object relations, interactive actions or positional relationships among objects), actions (non-interactive actions and behaviors, e.g., run, walk, take a shower, etc.), object attributes(Size, shape, color, material, etc.), image content reasoning (object quantity, object relation, object actions that are implicityly conveyed by the image description; it's okay to be empty), and others (such as texts in the image, clock reading, etc.).
-Content Requirements: Content should be distinct and non-overlapping as much as possible.
-Other Requirements: For each extracted item in a specific aspect, I require the original text from a description sentence in proper form and MUST be strictly consistent with the original sentence.
-Extract some simple questions (does not contain composite description) (yes-or-no answerable question) paired to key aspects item in JSON format.

# Requirement of questions:
-Content Requirements: The question needs to be a yes-or-no answerable question, paired to key aspects item in JSON format. Content should be distinct and non-overlapping as much as possible.
-Content Requirements: The objects in the question #MUST be simple objects or simple relations, not complex ones. Multiple question should be decomposed.
-Format requirements: Question in "object quantity" iterm requires the use of <multi> to indicate more than one of the same object with a specific number(e.g., two, three, four, etc.).
-Format Requirements: "object_quantity": <multi>Are there specific number noun? "object_relation": Are/Is noun relation noun? "object_attributes": Are/Is noun attribute? "object_action": Are/Is noun verb?
-Other Requirements: One aspect item can correspond to multiple questions, keep each question as concise as possible.
-Other Requirements: Question in "object_quantity" iterm requires the use of <multi> to indicate more than one of the same object with a specific number(e.g., two, three, four, etc.). <multi> only appears in the "object_quantity" iterm.
-Other Requirements: All vague (eg: #some#, #several#, #a group of#) or speculative (eg: #possibly#, #appears#, #seems#) statements MUST be eliminated.

# Step Tips:
-Ignore vague or speculative statements in the input.
-Check whether the requirements of aspects are met and remove unsatisfied items.
-Extract questions based on the extracted key aspects.
-Organize aspects and questions in the required format to obtain output.
-Check whether questions meet the requirements and remove unsatisfied items.
-Organize aspects and questions in the required format to obtain output.

# Examples
**Example Input**:"Yes, a dog on the right side of two women might want to pee on the yellow object, as it is a fire hydrant. Fire hydrants are typically found in public spaces, like parks or streets, and are used by firefighters to access water in case of emergencies. They are often painted in bright colors, such as yellow, to make them easily visible for both humans and animals. In this case, the yellow fire hydrant in the grassy area is an attractive spot for dogs to mark their territory or simply to relieve themselves."
**Example Analysis**:There are many complex aspect items in the article, so when extrating questions, they need to be decomposed. Thus, they are corresponding to multiple questions. "Several" is a vague statement, so ignore this sentence in the input. (Analysis does not require output.)

**Example Output**
```json
{
  "knowledge_and_functionality": [
    {
      "text": "Fire hydrants are typically found in public spaces, like parks or streets, and are used by firefighters to access water in case of emergencies.",
      "question": [
        "Are fire hydrants found in public spaces?",
        "Are fire hydrants used by firefighters?",
        "Are fire hydrants used to access water in case of emergencies?"
      ]
    },
    {
      "text": "They are often painted in bright colors, such as yellow, to make them easily visible for both humans and animals",
      "question": [
        "Are fire hydrants often in bright colors?",
        "Are fire hydrants painted to be easily visible?"
      ]
    }
  ],
  "object_quantity": [
    {
      "text": "a dog on the right side of two women might want to pee on the yellow object",
      "question": [
        "<multi>Are there two women?"
      ]
    }
  ],
  "object_relation": [
    {
      "text": "a dog on the right side of two women might want to pee on the yellow object",
      "question": [
        "Is there a dog on the right side of two women?",
        "Does the dog pee on the yellow object?"
      ]
    },
    {
      "text": "the yellow fire hydrant in the grassy area",
      "question": [
        "Is the fire hydrant in the grassy area?"
      ]
    }
  ],
  "object_attributes": [
    {
      "text": "the yellow fire hydrant in the grassy area ",
      "question": [
        "Is the fire hydrant yellow?"
      ]
    }
  ],
  "reasoning": [
    {
      "text": "an attractive spot for dogs to mark their territory or simply to relieve themselves",
      "question": [
        "Is the dog peeing on fire hydrant for marking territory?",
        "Is the dog peeing on fire hydrant for relieving themselves?"
      ]
    }
  ],
  "others": []
}
```

# Notes:
-Vague (eg: some, several etc.) or speculative (eg: possibly, appears, seems, might, Perhaps, Maybe, Could, likely, etc.) statements #MUST be eliminated in both aspects and questions.
-The questions raised can be missing if you are not sure, but they must not be wrong. Make sure that all the questions raised meet the previous requirements, and is placed in the correct aspects catalogue.
-The objects in the question #MUST be simple objects or simple relations, not complex ones. Multiple question should be decomposed.

# Input
**Input**:"{{DESCRIPTION}}"
)PROMPT";

}  // namespace

std::string build_semantic_extraction_prompt(const std::string& response_text) {
  if (response_text.empty()) {
    throw PreconditionError("extraction prompt requires non-empty response text");
  }
  std::string prompt = kExtractionPrompt;
  const std::size_t pos = prompt.find(kInputMarker);
  prompt.replace(pos, std::string(kInputMarker).size(), response_text);
  return prompt;
}

}  // namespace halprobe::claims
