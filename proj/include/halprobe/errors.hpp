#pragma once

#include <stdexcept>
#include <string>

namespace halprobe {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// A caller violated an operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Configuration file or value is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace gateway {

class GatewayError : public Error {
 public:
  using Error::Error;
};

// Endpoint could not be reached after exhausting retries.
class UnreachableError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

// Endpoint returned a payload that does not conform to the wire schema.
class MalformedResponseError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

// Endpoint kept rate-limiting until retries were exhausted.
class RateLimitedError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

// The mock script has no matching entry and no default response.
class MockScriptMissError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

}  // namespace gateway

namespace claims {

// No JSON object could be recovered from the extraction model's output.
class ParseError : public Error {
 public:
  using Error::Error;
};

// JSON parsed but its shape deviates from the {text, question[]} entry form.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// The <multi> marker appeared outside the object_quantity category.
class MultiPlacementError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

}  // namespace claims

}  // namespace halprobe
