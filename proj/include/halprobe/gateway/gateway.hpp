#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "halprobe/gateway/transport.hpp"
#include "halprobe/gateway/types.hpp"

namespace halprobe::gateway {

namespace detail {
class Semaphore;
}

// Key/value store consulted before any transport call. Keys are pure
// functions of (endpoint id, full canonical payload); entries are immutable.
class ResponseCache {
 public:
  virtual ~ResponseCache() = default;

  virtual std::optional<std::string> lookup(const std::string& key) = 0;
  virtual void store(const std::string& key, const std::string& request_payload,
                     const std::string& response) = 0;
};

struct GatewayStats {
  std::size_t requests_sent = 0;  // transport invocations, cache hits excluded
  std::size_t cache_hits = 0;
  std::size_t retries = 0;
};

// Uniform access to one chat-completion endpoint: caching, bounded in-flight
// concurrency, retry with exponential backoff. Safe for concurrent use.
class ModelGateway {
 public:
  using SleepFn = std::function<void(std::chrono::milliseconds)>;

  ModelGateway(ModelEndpointConfig config, std::shared_ptr<ModelTransport> transport,
               ResponseCache* cache = nullptr, std::size_t max_in_flight = 8,
               SleepFn sleep = {});

  // Full text response for a chat request. Against the mock transport this is
  // a pure function of request content.
  std::string complete(const ChatRequest& request);

  // Binary self-probe: forces greedy decoding (temperature 0) regardless of
  // any caller settings. The question must end with '?'.
  std::string complete_binary(const std::string& image, const std::string& question);

  GatewayStats stats() const;
  const ModelEndpointConfig& config() const { return config_; }

  static std::string cache_key(const ModelEndpointConfig& config,
                               const nlohmann::ordered_json& payload);

 private:
  std::string run_with_retries(const nlohmann::ordered_json& payload);

  ModelEndpointConfig config_;
  std::shared_ptr<ModelTransport> transport_;
  ResponseCache* cache_;
  SleepFn sleep_;
  std::shared_ptr<detail::Semaphore> in_flight_;

  mutable std::mutex stats_mutex_;
  GatewayStats stats_;
};

}  // namespace halprobe::gateway
