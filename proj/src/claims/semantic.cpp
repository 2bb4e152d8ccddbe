#include "halprobe/claims/semantic.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cctype>
#include <set>

#include "halprobe/errors.hpp"

namespace halprobe::claims {

const char* to_string(ClaimCategory category) {
  switch (category) {
    case ClaimCategory::Existence:
      return "existence";
    case ClaimCategory::Knowledge:
      return "knowledge";
    case ClaimCategory::Quantity:
      return "quantity";
    case ClaimCategory::Relation:
      return "relation";
    case ClaimCategory::Attribute:
      return "attribute";
    case ClaimCategory::Action:
      return "action";
    case ClaimCategory::Reasoning:
      return "reasoning";
    case ClaimCategory::Other:
      return "other";
  }
  return "other";
}

ClaimCategory claim_category_from_string(const std::string& name) {
  if (name == "existence") return ClaimCategory::Existence;
  if (name == "knowledge") return ClaimCategory::Knowledge;
  if (name == "quantity") return ClaimCategory::Quantity;
  if (name == "relation") return ClaimCategory::Relation;
  if (name == "attribute") return ClaimCategory::Attribute;
  if (name == "action") return ClaimCategory::Action;
  if (name == "reasoning") return ClaimCategory::Reasoning;
  if (name == "other") return ClaimCategory::Other;
  throw Error("unknown claim category: " + name);
}

const char* to_string(ExtractionWarningKind kind) {
  switch (kind) {
    case ExtractionWarningKind::SourceNotSubstring:
      return "source_not_substring";
    case ExtractionWarningKind::VagueLanguage:
      return "vague_language";
    case ExtractionWarningKind::DuplicateQuestion:
      return "duplicate_question";
  }
  return "source_not_substring";
}

namespace {

constexpr const char* kMultiMarker = "<multi>";

// Schema keys in canonical order; parsing iterates this order so claim
// indices do not depend on document key order.
constexpr std::array<std::pair<const char*, ClaimCategory>, 7> kCategoryKeys = {{
    {"knowledge_and_functionality", ClaimCategory::Knowledge},
    {"object_quantity", ClaimCategory::Quantity},
    {"object_relation", ClaimCategory::Relation},
    {"object_attributes", ClaimCategory::Attribute},
    {"object_action", ClaimCategory::Action},
    {"reasoning", ClaimCategory::Reasoning},
    {"others", ClaimCategory::Other},
}};

const std::set<std::string> kHedgeWords = {
    "some", "several", "possibly", "appears", "seems",
    "might", "perhaps", "maybe",    "could",   "likely",
};

bool contains_hedge_word(const std::string& question) {
  std::string lowered;
  lowered.reserve(question.size());
  for (char ch : question) {
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  std::size_t pos = 0;
  while (pos < lowered.size()) {
    if (!std::isalpha(static_cast<unsigned char>(lowered[pos]))) {
      ++pos;
      continue;
    }
    std::size_t start = pos;
    while (pos < lowered.size() && std::isalpha(static_cast<unsigned char>(lowered[pos]))) ++pos;
    if (kHedgeWords.count(lowered.substr(start, pos - start))) return true;
  }
  return false;
}

enum class TokenKind { Punct, String, Scalar };

struct JsonToken {
  TokenKind kind;
  std::string text;  // raw lexeme, escapes preserved
};

bool starts_value(const JsonToken& token) {
  if (token.kind != TokenKind::Punct) return true;
  return token.text == "{" || token.text == "[";
}

bool ends_value(const JsonToken& token) {
  if (token.kind != TokenKind::Punct) return true;
  return token.text == "}" || token.text == "]";
}

}  // namespace

std::string repair_json_object(const std::string& text) {
  const std::size_t open = text.find('{');
  if (open == std::string::npos) {
    throw ParseError("no JSON object found in extraction output");
  }

  // Tokenize from the first '{' to its matching brace.
  std::vector<JsonToken> tokens;
  int depth = 0;
  std::size_t i = open;
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (ch == '"') {
      std::size_t j = i + 1;
      while (j < text.size()) {
        if (text[j] == '\\') {
          j += 2;
          continue;
        }
        if (text[j] == '"') break;
        ++j;
      }
      if (j >= text.size()) throw ParseError("unterminated string in extraction output");
      tokens.push_back({TokenKind::String, text.substr(i, j - i + 1)});
      i = j + 1;
      continue;
    }
    if (ch == '{' || ch == '[' || ch == '}' || ch == ']' || ch == ',' || ch == ':') {
      tokens.push_back({TokenKind::Punct, std::string(1, ch)});
      if (ch == '{' || ch == '[') ++depth;
      if (ch == '}' || ch == ']') {
        --depth;
        if (depth == 0) break;
      }
      ++i;
      continue;
    }
    // Number / true / false / null.
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                               text[i] == '.' || text[i] == '-' || text[i] == '+')) {
      ++i;
    }
    if (i == start) throw ParseError("unexpected character in extraction output");
    tokens.push_back({TokenKind::Scalar, text.substr(start, i - start)});
  }
  if (depth != 0) throw ParseError("unbalanced braces in extraction output");

  // Re-emit, inserting separators missing between adjacent values and
  // dropping separators that sit directly before a closing bracket.
  std::string repaired;
  const JsonToken* prev = nullptr;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const JsonToken& token = tokens[t];
    if (token.kind == TokenKind::Punct && token.text == ",") {
      const bool next_closes_or_repeats =
          t + 1 < tokens.size() && tokens[t + 1].kind == TokenKind::Punct &&
          (tokens[t + 1].text == "}" || tokens[t + 1].text == "]" || tokens[t + 1].text == ",");
      const bool leading = prev == nullptr ||
                           (prev->kind == TokenKind::Punct &&
                            (prev->text == "{" || prev->text == "[" || prev->text == ","));
      if (next_closes_or_repeats || leading) continue;
    }
    if (prev && ends_value(*prev) && starts_value(token)) {
      repaired.push_back(',');
    }
    repaired += token.text;
    prev = &token;
  }
  return repaired;
}

SemanticExtractionResult parse_semantic_claims(const std::string& model_output,
                                               const std::string& source_response) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(model_output, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    doc = nlohmann::ordered_json::parse(repair_json_object(model_output), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw ParseError("no valid JSON object found in extraction output");
    }
  }

  static const std::set<std::string> kAllowedKeys = [] {
    std::set<std::string> keys;
    for (const auto& [key, category] : kCategoryKeys) keys.insert(key);
    return keys;
  }();
  for (const auto& item : doc.items()) {
    if (!kAllowedKeys.count(item.key())) {
      throw SchemaError("unknown category key: " + item.key());
    }
  }

  SemanticExtractionResult result;
  std::set<std::string> seen_questions;
  for (const auto& [key, category] : kCategoryKeys) {
    if (!doc.contains(key)) continue;
    const auto& entries = doc.at(key);
    if (!entries.is_array()) {
      throw SchemaError(std::string("category \"") + key + "\" must hold an array");
    }
    for (const auto& entry : entries) {
      if (!entry.is_object() || !entry.contains("text") || !entry.at("text").is_string() ||
          !entry.contains("question") || !entry.at("question").is_array()) {
        throw SchemaError(std::string("entries under \"") + key +
                          "\" must be {text, question[]} objects");
      }
      const std::string source_text = entry.at("text").get<std::string>();
      if (source_text.empty()) {
        throw SchemaError(std::string("empty source text under \"") + key + "\"");
      }
      for (const auto& question_json : entry.at("question")) {
        if (!question_json.is_string()) {
          throw SchemaError(std::string("questions under \"") + key + "\" must be strings");
        }
        std::string question = question_json.get<std::string>();

        bool multi_marked = false;
        std::size_t marker = question.find(kMultiMarker);
        if (marker != std::string::npos) {
          if (category != ClaimCategory::Quantity) {
            throw MultiPlacementError("<multi> marker outside object_quantity: " + question);
          }
          while (marker != std::string::npos) {
            question.erase(marker, std::string(kMultiMarker).size());
            marker = question.find(kMultiMarker);
          }
          while (!question.empty() && question.front() == ' ') question.erase(question.begin());
          multi_marked = true;
        }
        if (question.empty() || question.back() != '?') {
          throw SchemaError("extracted question must end with '?': \"" + question + "\"");
        }

        const std::size_t index = result.claims.size();
        if (source_response.find(source_text) == std::string::npos) {
          result.warnings.push_back({index, ExtractionWarningKind::SourceNotSubstring});
        }
        if (contains_hedge_word(question)) {
          result.warnings.push_back({index, ExtractionWarningKind::VagueLanguage});
        }
        if (!seen_questions.insert(question).second) {
          result.warnings.push_back({index, ExtractionWarningKind::DuplicateQuestion});
        }
        result.claims.push_back({source_text, category, question, multi_marked});
      }
    }
  }
  return result;
}

std::string serialize_claims(const std::vector<AtomicClaim>& claims) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [key, category] : kCategoryKeys) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& claim : claims) {
      if (claim.category != category) continue;
      const std::string question =
          claim.multi_marked ? std::string(kMultiMarker) + claim.question : claim.question;
      entries.push_back({{"text", claim.source_text},
                         {"question", nlohmann::ordered_json::array({question})}});
    }
    if (!entries.empty()) doc[key] = std::move(entries);
  }
  return doc.dump(2);
}

}  // namespace halprobe::claims
