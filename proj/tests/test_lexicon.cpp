#include <doctest.h>

#include <set>

#include "halprobe/claims/lexicon.hpp"
#include "halprobe/errors.hpp"
#include "halprobe/util/rng.hpp"

using namespace halprobe;
using claims::ObjectLexicon;

namespace {

ObjectLexicon lexicon_of(const nlohmann::json& doc) { return ObjectLexicon::from_json(doc); }

const nlohmann::json kBasicLexicon = {
    {"objects", {"knife", "table", "dog", "frisbee", "potted plant", "glasses", "apple", "bus"}},
    {"synonyms", {{"puppy", "dog"}, {"doggo", "dog"}}},
};

}  // namespace

TEST_CASE("direct lexicon hits in first-occurrence order") {
  const auto lex = lexicon_of(kBasicLexicon);
  CHECK(claims::extract_object_claims("a knife on the table", lex) ==
        std::vector<std::string>{"knife", "table"});
  CHECK(claims::extract_object_claims("", lex).empty());
  CHECK(claims::extract_object_claims("nothing relevant here", lex).empty());
}

TEST_CASE("plural folding and synonyms map to canonical names") {
  const auto lex = lexicon_of(kBasicLexicon);
  CHECK(claims::extract_object_claims("two dogs chase a frisbee", lex) ==
        std::vector<std::string>{"dog", "frisbee"});
  CHECK(claims::extract_object_claims("knives everywhere", lex).empty());  // irregular plural
  CHECK(claims::extract_object_claims("tables and apples", lex) ==
        std::vector<std::string>{"table", "apple"});
  CHECK(claims::extract_object_claims("a puppy sleeps", lex) == std::vector<std::string>{"dog"});
}

TEST_CASE("plural exceptions are not folded") {
  const auto lex = lexicon_of(kBasicLexicon);
  // "glasses" is canonical and exempt from stripping; "bus" keeps its s.
  CHECK(claims::extract_object_claims("red glasses on a bus", lex) ==
        std::vector<std::string>{"glasses", "bus"});
}

TEST_CASE("bigrams beat unigrams and tokenization ignores punctuation") {
  const auto lex = lexicon_of({{"objects", {"potted plant", "plant", "dog"}}});
  CHECK(claims::extract_object_claims("A potted plant, and a dog!", lex) ==
        std::vector<std::string>{"potted plant", "dog"});
  CHECK(claims::extract_object_claims("the plant grows", lex) ==
        std::vector<std::string>{"plant"});
  CHECK(claims::extract_object_claims("two potted plants", lex) ==
        std::vector<std::string>{"potted plant"});
}

TEST_CASE("mentions report the verbatim span") {
  const auto lex = lexicon_of(kBasicLexicon);
  const auto mentions = claims::extract_object_mentions("Two Dogs chase a Frisbee.", lex);
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].canonical == "dog");
  CHECK(mentions[0].span == "Dogs");
  CHECK(mentions[1].canonical == "frisbee");
  CHECK(mentions[1].span == "Frisbee");
}

TEST_CASE("output is deduplicated and a subset of canonical objects") {
  const auto lex = lexicon_of(kBasicLexicon);
  util::Rng rng(7);
  const std::vector<std::string> vocabulary = {"knife", "table", "dogs",  "puppy", "and",
                                               "the",   "runs",  "apple", "buses", "glasses"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const auto words = rng.uniform_int(0, 12);
    for (int w = 0; w < words; ++w) {
      text += vocabulary[static_cast<std::size_t>(rng.uniform_int(0, 9))];
      text += ' ';
    }
    const auto extracted = claims::extract_object_claims(text, lex);
    std::set<std::string> unique(extracted.begin(), extracted.end());
    CHECK(unique.size() == extracted.size());
    for (const auto& object : extracted) {
      CHECK(lex.canonical_objects().count(object) == 1);
    }
  }
}

TEST_CASE("lexicon validation rejects bad shapes") {
  CHECK_THROWS_AS(lexicon_of({{"objects", {"Dog"}}}), ConfigError);      // uppercase
  CHECK_THROWS_AS(lexicon_of({{"objects", {" dog"}}}), ConfigError);     // leading space
  CHECK_THROWS_AS(lexicon_of({{"objects", {""}}}), ConfigError);         // empty
  CHECK_THROWS_AS(lexicon_of({{"objects", {"dog"}}, {"synonyms", {{"pup", "cat"}}}}),
                  ConfigError);  // synonym target missing
  CHECK_THROWS_AS(lexicon_of(nlohmann::json::array()), ConfigError);
}

TEST_CASE("existence question template") {
  CHECK(claims::template_existence_question("knife") == "Is there a knife in the image?");
  CHECK(claims::template_existence_question("apple") == "Is there an apple in the image?");
  CHECK(claims::template_existence_question("potted plant") ==
        "Is there a potted plant in the image?");
  CHECK(claims::template_existence_question("umbrella") == "Is there an umbrella in the image?");
  CHECK_THROWS_AS(claims::template_existence_question(""), PreconditionError);
}

TEST_CASE("existence questions contain the object verbatim") {
  for (const std::string object : {"dog", "orange", "fire hydrant", "ice cream"}) {
    const auto question = claims::template_existence_question(object);
    CHECK(question.find(object) != std::string::npos);
    CHECK(question.size() >= 13);
    CHECK(question.substr(question.size() - 13) == "in the image?");
  }
}
