#pragma once

#include <string>

#include "halprobe/claims/claim.hpp"

namespace halprobe::claims {

// Version tag of the embedded extraction prompt resource.
extern const char* const kExtractionPromptVersion;

// The structured extraction prompt with the response text substituted in as
// the input description. The prompt instructs the extraction model to return
// one JSON object keyed by semantic category.
std::string build_semantic_extraction_prompt(const std::string& response_text);

// Parses the extraction model's output into atomic claims.
//
// Tolerates code fences, surrounding prose, missing commas between adjacent
// values, and trailing commas (LLM outputs are frequently almost-JSON).
// Throws ParseError when no JSON object can be recovered, SchemaError when
// the shape deviates from the {text, question[]} entry form, and
// MultiPlacementError when <multi> appears outside object_quantity.
//
// source_response is the text extraction ran on; claims whose source_text is
// not a substring of it get a SourceNotSubstring warning.
SemanticExtractionResult parse_semantic_claims(const std::string& model_output,
                                               const std::string& source_response);

// Renders claims back into the extraction output schema (category-keyed JSON,
// <multi> markers restored). parse_semantic_claims(serialize_claims(c), ...)
// yields claims identical to c.
std::string serialize_claims(const std::vector<AtomicClaim>& claims);

// Lexical cleanup pass used by the parser: extracts the first balanced JSON
// object, inserting separators missing between adjacent values and dropping
// trailing commas. Exposed for direct testing.
std::string repair_json_object(const std::string& text);

}  // namespace halprobe::claims
