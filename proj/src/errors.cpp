#include "strainforge/errors.hpp"

namespace strainforge {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRotation: return "InvalidRotation";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::EmptyRequest: return "EmptyRequest";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NoSingleEmitters: return "NoSingleEmitters";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace strainforge
