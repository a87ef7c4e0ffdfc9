#include "arw/errors.hpp"

namespace arw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::CurveTooLarge: return "CurveTooLarge";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::DegenerateJet: return "DegenerateJet";
    case ErrorCode::InvalidCorrelation: return "InvalidCorrelation";
    case ErrorCode::ExpansionOutOfDomain: return "ExpansionOutOfDomain";
    case ErrorCode::ZeroCurvature: return "ZeroCurvature";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::ProbeDegenerate: return "ProbeDegenerate";
    case ErrorCode::NumericalMismatch: return "NumericalMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace arw
