#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace halprobe::gateway {

// One-shot delivery of a canonical request payload to a model backend.
// Implementations throw UnreachableError or RateLimitedError for transient
// failures (the gateway retries those) and MalformedResponseError when the
// backend's reply does not conform to the wire schema.
class ModelTransport {
 public:
  virtual ~ModelTransport() = default;

  virtual std::string send(const nlohmann::ordered_json& payload) = 0;
};

}  // namespace halprobe::gateway
