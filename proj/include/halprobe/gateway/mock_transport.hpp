#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "halprobe/gateway/transport.hpp"

namespace halprobe::gateway {

// Deterministic scripted model for offline runs and tests.
//
// Script file format:
//   {
//     "entries": [
//       {"image": "img1", "prompt": "Describe the image in detail.",
//        "seed": 11, "temperature": 0.7, "response": "A dog."},
//       {"prompt_contains": "distinctive substring", "response": "..."}
//     ],
//     "default": "optional fallback text"
//   }
//
// A request matches an entry when every field present in the entry equals the
// corresponding request field ("prompt" compares against the last user turn;
// "prompt_contains" is a substring test). Entries are tried in file order and
// the first match wins; otherwise the default applies. A miss with no default
// raises MockScriptMissError. Responses are a pure function of the request,
// so identical requests always yield byte-identical text.
class MockTransport : public ModelTransport {
 public:
  static MockTransport from_file(const std::filesystem::path& script_path);
  static MockTransport from_json(const nlohmann::json& script);

  std::string send(const nlohmann::ordered_json& payload) override;

  // All payloads seen, in arrival order. For asserting request contracts.
  std::vector<nlohmann::ordered_json> recorded_requests() const;
  std::size_t call_count() const;

 private:
  struct Entry {
    std::optional<std::string> image;
    std::optional<std::string> prompt;
    std::optional<std::string> prompt_contains;
    std::optional<std::int64_t> seed;
    std::optional<double> temperature;
    std::string response;
  };

  bool matches(const Entry& entry, const nlohmann::ordered_json& payload) const;

  std::vector<Entry> entries_;
  std::optional<std::string> default_response_;

  mutable std::mutex mutex_;
  std::vector<nlohmann::ordered_json> recorded_;
};

}  // namespace halprobe::gateway
