#pragma once

#include <memory>
#include <string>

#include "halprobe/gateway/transport.hpp"
#include "halprobe/gateway/types.hpp"

namespace halprobe::gateway {

// HTTP chat-completion transport (the de-facto open schema: POST
// {base_url}/chat/completions with a messages array; image content travels as
// an image_url part, either the reference itself or a base64 data URL when
// the reference names a local file). See README for the exact field mapping.
class HttpTransport : public ModelTransport {
 public:
  explicit HttpTransport(const ModelEndpointConfig& config);
  ~HttpTransport() override;

  std::string send(const nlohmann::ordered_json& payload) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Builds the wire-format request body from a canonical payload. Exposed
// separately so the mapping is testable without a live server.
nlohmann::ordered_json to_wire_request(const nlohmann::ordered_json& payload);

// Extracts the assistant text from a wire-format response body; throws
// MalformedResponseError when the shape does not conform.
std::string from_wire_response(const std::string& body);

}  // namespace halprobe::gateway
