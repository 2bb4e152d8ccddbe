#include "halprobe/claims/lexicon.hpp"

#include <cctype>

#include "halprobe/errors.hpp"
#include "halprobe/util/fs.hpp"

namespace halprobe::claims {

namespace {

// Singular-looking words that end in 's'; plural folding leaves them alone.
const std::set<std::string> kDefaultPluralExceptions = {
    "glasses", "scissors", "pants", "shorts", "jeans", "bus", "grass", "dress", "chess",
};

bool is_lower_alpha_or_space(const std::string& value) {
  if (value.empty()) return false;
  if (value.front() == ' ' || value.back() == ' ') return false;
  for (char ch : value) {
    if (ch != ' ' && !(std::islower(static_cast<unsigned char>(ch)))) return false;
  }
  return true;
}

}  // namespace

ObjectLexicon ObjectLexicon::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("objects") || !doc.at("objects").is_array()) {
    throw ConfigError("lexicon: expected object with an \"objects\" array");
  }
  ObjectLexicon lexicon;
  lexicon.plural_exceptions_ = kDefaultPluralExceptions;
  for (const auto& entry : doc.at("objects")) {
    const std::string name = entry.get<std::string>();
    if (!is_lower_alpha_or_space(name)) {
      throw ConfigError("lexicon: canonical objects must be nonempty lowercase, no surrounding "
                        "whitespace: \"" + name + "\"");
    }
    lexicon.canonical_.insert(name);
  }
  if (doc.contains("synonyms")) {
    for (const auto& [alias, target] : doc.at("synonyms").items()) {
      const std::string canonical = target.get<std::string>();
      if (!lexicon.canonical_.count(canonical)) {
        throw ConfigError("lexicon: synonym \"" + alias + "\" maps to unknown object \"" +
                          canonical + "\"");
      }
      lexicon.synonyms_[alias] = canonical;
    }
  }
  if (doc.contains("plural_exceptions")) {
    for (const auto& entry : doc.at("plural_exceptions")) {
      lexicon.plural_exceptions_.insert(entry.get<std::string>());
    }
  }
  return lexicon;
}

ObjectLexicon ObjectLexicon::from_file(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(util::read_file(path), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("lexicon: invalid JSON in " + path.string());
  return from_json(doc);
}

std::string ObjectLexicon::resolve(const std::string& surface) const {
  if (canonical_.count(surface)) return surface;
  auto it = synonyms_.find(surface);
  if (it != synonyms_.end()) return it->second;
  return {};
}

bool ObjectLexicon::is_plural_exception(const std::string& token) const {
  return plural_exceptions_.count(token) > 0;
}

namespace {

struct Token {
  std::string lower;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    Token token;
    token.begin = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
      token.lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
      ++i;
    }
    token.end = i;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

// Surface variants in lookup order: the token itself, then plural-folded
// forms ("-s", then "-es") unless the token is a known exception.
std::vector<std::string> surface_forms(const std::string& token, const ObjectLexicon& lexicon) {
  std::vector<std::string> forms = {token};
  if (lexicon.is_plural_exception(token)) return forms;
  if (token.size() > 2 && token.back() == 's') {
    forms.push_back(token.substr(0, token.size() - 1));
    if (token.size() > 3 && token[token.size() - 2] == 'e') {
      forms.push_back(token.substr(0, token.size() - 2));
    }
  }
  return forms;
}

std::string resolve_forms(const std::vector<std::string>& forms, const ObjectLexicon& lexicon) {
  for (const auto& form : forms) {
    const std::string canonical = lexicon.resolve(form);
    if (!canonical.empty()) return canonical;
  }
  return {};
}

}  // namespace

std::vector<ObjectMention> extract_object_mentions(const std::string& text,
                                                   const ObjectLexicon& lexicon) {
  const std::vector<Token> tokens = tokenize(text);
  std::vector<ObjectMention> mentions;
  std::set<std::string> seen;

  auto emit = [&](const std::string& canonical, std::size_t begin, std::size_t end) {
    if (seen.insert(canonical).second) {
      mentions.push_back({canonical, text.substr(begin, end - begin)});
    }
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    // Bigram first so multi-word objects win over their heads.
    if (i + 1 < tokens.size()) {
      std::string matched;
      for (const auto& second : surface_forms(tokens[i + 1].lower, lexicon)) {
        matched = resolve_forms({tokens[i].lower + " " + second}, lexicon);
        if (!matched.empty()) break;
      }
      if (!matched.empty()) {
        emit(matched, tokens[i].begin, tokens[i + 1].end);
        i += 2;
        continue;
      }
    }
    const std::string canonical = resolve_forms(surface_forms(tokens[i].lower, lexicon), lexicon);
    if (!canonical.empty()) emit(canonical, tokens[i].begin, tokens[i].end);
    ++i;
  }
  return mentions;
}

std::vector<std::string> extract_object_claims(const std::string& text,
                                               const ObjectLexicon& lexicon) {
  std::vector<std::string> names;
  for (const auto& mention : extract_object_mentions(text, lexicon)) {
    names.push_back(mention.canonical);
  }
  return names;
}

std::string template_existence_question(const std::string& object_name) {
  if (object_name.empty()) {
    throw PreconditionError("existence question requires a non-empty object name");
  }
  const char first = static_cast<char>(std::tolower(static_cast<unsigned char>(object_name[0])));
  const bool vowel = first == 'a' || first == 'e' || first == 'i' || first == 'o' || first == 'u';
  return std::string("Is there ") + (vowel ? "an " : "a ") + object_name + " in the image?";
}

}  // namespace halprobe::claims
