#include "halprobe/gateway/types.hpp"

#include <cctype>

#include "halprobe/errors.hpp"

namespace halprobe::gateway {

void ModelEndpointConfig::validate() const {
  if (base_url.empty()) throw ConfigError("endpoint: base_url must be non-empty");
  if (max_retries < 0) throw ConfigError("endpoint: max_retries must be >= 0");
  if (timeout.count() <= 0) throw ConfigError("endpoint: timeout must be positive");
  if (backoff_base.count() < 0) throw ConfigError("endpoint: backoff_base must be >= 0");
}

void SamplingParams::validate() const {
  if (temperature < 0) throw ConfigError("sampling: temperature must be >= 0");
  if (top_p <= 0 || top_p > 1) throw ConfigError("sampling: top_p must be in (0, 1]");
  if (max_tokens <= 0) throw ConfigError("sampling: max_tokens must be positive");
}

void ChatRequest::validate() const {
  if (turns.empty()) throw PreconditionError("chat request must contain at least one turn");
  if (image.empty()) throw PreconditionError("chat request must reference exactly one image");
  sampling.validate();
}

nlohmann::ordered_json ChatRequest::canonical_payload(const std::string& model_id) const {
  nlohmann::ordered_json payload;
  payload["model"] = model_id;
  payload["image"] = image;
  payload["temperature"] = sampling.temperature;
  payload["top_p"] = sampling.top_p;
  payload["max_tokens"] = sampling.max_tokens;
  if (sampling.seed) payload["seed"] = *sampling.seed;
  nlohmann::ordered_json turns_json = nlohmann::ordered_json::array();
  for (const auto& turn : turns) {
    turns_json.push_back({{"role", turn.role}, {"text", turn.text}});
  }
  payload["turns"] = std::move(turns_json);
  return payload;
}

const char* to_string(BinaryAnswer answer) {
  switch (answer) {
    case BinaryAnswer::Yes:
      return "yes";
    case BinaryAnswer::No:
      return "no";
    case BinaryAnswer::Unparseable:
      return "unparseable";
  }
  return "unparseable";
}

BinaryAnswer binary_answer_from_string(const std::string& text) {
  if (text == "yes") return BinaryAnswer::Yes;
  if (text == "no") return BinaryAnswer::No;
  return BinaryAnswer::Unparseable;
}

namespace {

std::string lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return out;
}

bool is_alpha(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) != 0; }

}  // namespace

BinaryAnswer parse_binary(const std::string& raw) {
  // First alphabetic token.
  std::size_t i = 0;
  while (i < raw.size() && !is_alpha(raw[i])) ++i;
  std::size_t start = i;
  while (i < raw.size() && is_alpha(raw[i])) ++i;
  if (i > start) {
    const std::string token = lower(std::string_view(raw).substr(start, i - start));
    if (token == "yes") return BinaryAnswer::Yes;
    if (token == "no") return BinaryAnswer::No;
  }

  // Scan the first sentence for exactly one standalone "yes" or "no".
  std::size_t sentence_end = raw.find_first_of(".!?");
  const std::string sentence =
      lower(sentence_end == std::string::npos ? raw : raw.substr(0, sentence_end));
  int yes_count = 0;
  int no_count = 0;
  std::size_t pos = 0;
  while (pos < sentence.size()) {
    if (!is_alpha(sentence[pos])) {
      ++pos;
      continue;
    }
    std::size_t word_start = pos;
    while (pos < sentence.size() && is_alpha(sentence[pos])) ++pos;
    const std::string_view word(sentence.data() + word_start, pos - word_start);
    if (word == "yes") ++yes_count;
    if (word == "no") ++no_count;
  }
  if (yes_count + no_count == 1) {
    return yes_count == 1 ? BinaryAnswer::Yes : BinaryAnswer::No;
  }
  return BinaryAnswer::Unparseable;
}

}  // namespace halprobe::gateway
