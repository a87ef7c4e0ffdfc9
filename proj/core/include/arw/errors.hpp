#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arw {

enum class ErrorCode {
  EmptySpectrum,
  InvalidRange,
  CurveTooLarge,
  InvalidDirection,
  InvalidCurve,
  DegenerateJet,
  InvalidCorrelation,
  ExpansionOutOfDomain,
  ZeroCurvature,
  InvalidMeasure,
  ProbeDegenerate,
  NumericalMismatch,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-status mapping) can branch without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail);

}  // namespace arw
