#include "halprobe/gateway/http_transport.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "halprobe/errors.hpp"
#include "halprobe/util/base64.hpp"
#include "halprobe/util/fs.hpp"

namespace halprobe::gateway {

namespace {

constexpr const char* kChatCompletionsPath = "/chat/completions";

struct SplitUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // possibly empty, no trailing slash
};

SplitUrl split_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("base_url must include a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  SplitUrl split;
  if (path_start == std::string::npos) {
    split.origin = base_url;
  } else {
    split.origin = base_url.substr(0, path_start);
    split.path_prefix = base_url.substr(path_start);
    while (!split.path_prefix.empty() && split.path_prefix.back() == '/') {
      split.path_prefix.pop_back();
    }
  }
  return split;
}

std::string image_part_url(const std::string& image_ref) {
  if (std::filesystem::exists(image_ref) && std::filesystem::is_regular_file(image_ref)) {
    const std::string bytes = util::read_file(image_ref);
    std::string mime = "image/jpeg";
    const auto ext = std::filesystem::path(image_ref).extension().string();
    if (ext == ".png") mime = "image/png";
    else if (ext == ".gif") mime = "image/gif";
    else if (ext == ".webp") mime = "image/webp";
    else if (ext == ".bmp") mime = "image/bmp";
    return "data:" + mime + ";base64," + util::base64_encode(bytes);
  }
  return image_ref;
}

}  // namespace

nlohmann::ordered_json to_wire_request(const nlohmann::ordered_json& payload) {
  nlohmann::ordered_json body;
  body["model"] = payload.at("model");
  body["temperature"] = payload.at("temperature");
  body["top_p"] = payload.at("top_p");
  body["max_tokens"] = payload.at("max_tokens");
  if (payload.contains("seed")) body["seed"] = payload.at("seed");

  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  bool image_attached = false;
  for (const auto& turn : payload.at("turns")) {
    const std::string role = turn.at("role").get<std::string>();
    const std::string text = turn.at("text").get<std::string>();
    if (role == "user" && !image_attached) {
      nlohmann::ordered_json content = nlohmann::ordered_json::array();
      content.push_back({{"type", "text"}, {"text", text}});
      content.push_back(
          {{"type", "image_url"},
           {"image_url", {{"url", image_part_url(payload.at("image").get<std::string>())}}}});
      messages.push_back({{"role", role}, {"content", std::move(content)}});
      image_attached = true;
    } else {
      messages.push_back({{"role", role}, {"content", text}});
    }
  }
  body["messages"] = std::move(messages);
  return body;
}

std::string from_wire_response(const std::string& body) {
  nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw MalformedResponseError("endpoint returned non-JSON body");
  }
  if (!parsed.contains("choices") || !parsed.at("choices").is_array() ||
      parsed.at("choices").empty()) {
    throw MalformedResponseError("endpoint response has no choices");
  }
  const auto& first = parsed.at("choices").at(0);
  if (!first.contains("message") || !first.at("message").contains("content") ||
      !first.at("message").at("content").is_string()) {
    throw MalformedResponseError("endpoint response has no message content");
  }
  return first.at("message").at("content").get<std::string>();
}

struct HttpTransport::Impl {
  SplitUrl url;
  std::string api_key;
  std::chrono::seconds timeout;
};

HttpTransport::HttpTransport(const ModelEndpointConfig& config) : impl_(new Impl) {
  config.validate();
  impl_->url = split_base_url(config.base_url);
  impl_->timeout = config.timeout;
  if (!config.api_key_env.empty()) {
    const char* value = std::getenv(config.api_key_env.c_str());
    if (!value || !*value) {
      throw ConfigError("credential environment variable not set: " + config.api_key_env);
    }
    impl_->api_key = value;
  }
}

HttpTransport::~HttpTransport() = default;

std::string HttpTransport::send(const nlohmann::ordered_json& payload) {
  httplib::Client client(impl_->url.origin);
  client.set_connection_timeout(impl_->timeout.count(), 0);
  client.set_read_timeout(impl_->timeout.count(), 0);

  httplib::Headers headers;
  if (!impl_->api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->api_key);
  }

  const std::string body = to_wire_request(payload).dump();
  auto result = client.Post(impl_->url.path_prefix + kChatCompletionsPath, headers, body,
                            "application/json");
  if (!result) {
    throw UnreachableError("connection to " + impl_->url.origin +
                           " failed: " + httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status == 429) {
    throw RateLimitedError("endpoint rate-limited the request (HTTP 429)");
  }
  if (status == 408 || status >= 500) {
    throw UnreachableError("endpoint returned HTTP " + std::to_string(status));
  }
  if (status >= 400) {
    throw GatewayError("endpoint rejected the request (HTTP " + std::to_string(status) +
                       "): " + result->body);
  }
  return from_wire_response(result->body);
}

}  // namespace halprobe::gateway
