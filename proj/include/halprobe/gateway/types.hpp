#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace halprobe::gateway {

struct ModelEndpointConfig {
  std::string base_url;
  std::string model_id;
  // Name of the environment variable holding the credential. Secrets never
  // live in config files or the run store.
  std::string api_key_env;
  std::chrono::seconds timeout{60};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{250};

  // Stable identifier used for cache keys and bookkeeping.
  std::string endpoint_id() const { return base_url + "#" + model_id; }

  void validate() const;
};

struct SamplingParams {
  double temperature = 0.7;
  double top_p = 1.0;
  int max_tokens = 512;
  std::optional<std::int64_t> seed;

  void validate() const;
};

struct ChatTurn {
  std::string role;  // "system", "user" or "assistant"
  std::string text;
};

struct ChatRequest {
  std::string image;  // file path or opaque identifier; exactly one per request
  std::vector<ChatTurn> turns;
  SamplingParams sampling;

  void validate() const;

  // Canonical JSON payload. This is the byte-exact content hashed for cache
  // keys and matched by the mock model; the image is kept as its reference,
  // never expanded.
  nlohmann::ordered_json canonical_payload(const std::string& model_id) const;
};

enum class BinaryAnswer { Yes, No, Unparseable };

const char* to_string(BinaryAnswer answer);
BinaryAnswer binary_answer_from_string(const std::string& text);

// Classifies a raw model reply as Yes/No/Unparseable. Total: never throws.
// Rule: case-insensitive match on the first alphabetic token; failing that,
// the first sentence must contain exactly one standalone "yes" or "no".
BinaryAnswer parse_binary(const std::string& raw);

}  // namespace halprobe::gateway
