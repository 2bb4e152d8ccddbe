#include "halprobe/gateway/mock_transport.hpp"

#include "halprobe/errors.hpp"
#include "halprobe/util/fs.hpp"

namespace halprobe::gateway {

namespace {

std::string last_user_turn(const nlohmann::ordered_json& payload) {
  const auto& turns = payload.at("turns");
  for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
    if (it->at("role").get<std::string>() == "user") {
      return it->at("text").get<std::string>();
    }
  }
  return {};
}

}  // namespace

MockTransport MockTransport::from_file(const std::filesystem::path& script_path) {
  nlohmann::json script = nlohmann::json::parse(util::read_file(script_path), nullptr, false);
  if (script.is_discarded() || !script.is_object()) {
    throw ConfigError("mock script is not a JSON object: " + script_path.string());
  }
  return from_json(script);
}

MockTransport MockTransport::from_json(const nlohmann::json& script) {
  MockTransport mock;
  if (script.contains("entries")) {
    for (const auto& raw : script.at("entries")) {
      Entry entry;
      if (raw.contains("image")) entry.image = raw.at("image").get<std::string>();
      if (raw.contains("prompt")) entry.prompt = raw.at("prompt").get<std::string>();
      if (raw.contains("prompt_contains")) {
        entry.prompt_contains = raw.at("prompt_contains").get<std::string>();
      }
      if (raw.contains("seed")) entry.seed = raw.at("seed").get<std::int64_t>();
      if (raw.contains("temperature")) entry.temperature = raw.at("temperature").get<double>();
      entry.response = raw.at("response").get<std::string>();
      mock.entries_.push_back(std::move(entry));
    }
  }
  if (script.contains("default")) {
    mock.default_response_ = script.at("default").get<std::string>();
  }
  return mock;
}

bool MockTransport::matches(const Entry& entry, const nlohmann::ordered_json& payload) const {
  if (entry.image && payload.at("image").get<std::string>() != *entry.image) return false;
  if (entry.prompt || entry.prompt_contains) {
    const std::string prompt = last_user_turn(payload);
    if (entry.prompt && prompt != *entry.prompt) return false;
    if (entry.prompt_contains && prompt.find(*entry.prompt_contains) == std::string::npos) {
      return false;
    }
  }
  if (entry.seed) {
    if (!payload.contains("seed") || payload.at("seed").get<std::int64_t>() != *entry.seed) {
      return false;
    }
  }
  if (entry.temperature && payload.at("temperature").get<double>() != *entry.temperature) {
    return false;
  }
  return true;
}

std::string MockTransport::send(const nlohmann::ordered_json& payload) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    recorded_.push_back(payload);
  }
  for (const auto& entry : entries_) {
    if (matches(entry, payload)) return entry.response;
  }
  if (default_response_) return *default_response_;
  throw MockScriptMissError("mock script has no entry for request: " + payload.dump());
}

std::vector<nlohmann::ordered_json> MockTransport::recorded_requests() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return recorded_;
}

std::size_t MockTransport::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return recorded_.size();
}

}  // namespace halprobe::gateway
