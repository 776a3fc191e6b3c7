#pragma once

#include <stdexcept>
#include <string>

namespace trafficforge {

enum class ErrorCode {
  invalid_parameter,
  parse_error,
  format_error,
  window_error,
  value_error,
  reference_error,
  empty_zone,
  invalid_weights,
  generation_exhausted,
  missing_cost,
  unroutable,
  validation_error,
  config_error,
  io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::format_error: return "format-error";
    case ErrorCode::window_error: return "window-error";
    case ErrorCode::value_error: return "value-error";
    case ErrorCode::reference_error: return "reference-error";
    case ErrorCode::empty_zone: return "empty-zone";
    case ErrorCode::invalid_weights: return "invalid-weights";
    case ErrorCode::generation_exhausted: return "generation-exhausted";
    case ErrorCode::missing_cost: return "missing-cost";
    case ErrorCode::unroutable: return "unroutable";
    case ErrorCode::validation_error: return "validation-error";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace trafficforge
