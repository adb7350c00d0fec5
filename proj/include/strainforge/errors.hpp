#pragma once

#include <stdexcept>
#include <string>

namespace strainforge {

// Numeric values are mirrored by sf_status in strainforge.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  InvalidRotation = 2,
  FrameMismatch = 3,
  InvalidGeometry = 4,
  OutOfDomain = 5,
  EmptyRequest = 6,
  DegenerateGeometry = 7,
  Infeasible = 8,
  InvalidDomain = 9,
  ParseError = 10,
  DuplicateAbscissa = 11,
  InvalidParameter = 12,
  NoSingleEmitters = 13,
  ConfigError = 14,
  IoError = 15,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace strainforge
