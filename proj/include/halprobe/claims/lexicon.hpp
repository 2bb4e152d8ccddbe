#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace halprobe::claims {

// Canonical object vocabulary for existence-claim extraction.
//
// File format:
//   {"objects": ["dog", "potted plant", ...],
//    "synonyms": {"puppy": "dog", ...},
//    "plural_exceptions": ["glasses", ...]}   // optional, merged with defaults
class ObjectLexicon {
 public:
  static ObjectLexicon from_json(const nlohmann::json& doc);
  static ObjectLexicon from_file(const std::filesystem::path& path);

  const std::set<std::string>& canonical_objects() const { return canonical_; }
  const std::map<std::string, std::string>& synonyms() const { return synonyms_; }

  // Resolves a surface form (already lowercased) to a canonical object, or
  // empty string when it is neither canonical nor a known synonym.
  std::string resolve(const std::string& surface) const;

  bool is_plural_exception(const std::string& token) const;

 private:
  std::set<std::string> canonical_;
  std::map<std::string, std::string> synonyms_;
  std::set<std::string> plural_exceptions_;
};

struct ObjectMention {
  std::string canonical;  // lexicon name
  std::string span;       // verbatim span in the input text
};

// Extracts canonical object names mentioned in text: tokenizes on
// non-alphabetic boundaries, lowercases, folds plurals (with the exception
// list), and matches bigrams before unigrams against objects and synonyms.
// Result is deduplicated, in first-occurrence order.
std::vector<ObjectMention> extract_object_mentions(const std::string& text,
                                                   const ObjectLexicon& lexicon);

// Canonical names only; the operation-level view of the above.
std::vector<std::string> extract_object_claims(const std::string& text,
                                               const ObjectLexicon& lexicon);

// "Is there a/an {object} in the image?", article chosen by initial vowel.
std::string template_existence_question(const std::string& object_name);

}  // namespace halprobe::claims
