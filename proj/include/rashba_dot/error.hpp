#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rashba_dot {

enum class ErrorCode {
  InvalidInput,
  BracketInvalid,
  NoConvergence,
  NotSingular,
  RankDeficiency2,
  DecayViolation,
  OrderCapExceeded,
  ArgumentOutOfRange,
  DomainError,
  BelowWindow,
  AboveWindow,
  WindowViolation,
  DegenerateState,
  NotNormalized,
  BoundaryPoint,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotSingular: return "NotSingular";
    case ErrorCode::RankDeficiency2: return "RankDeficiency2";
    case ErrorCode::DecayViolation: return "DecayViolation";
    case ErrorCode::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorCode::ArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BelowWindow: return "BelowWindow";
    case ErrorCode::AboveWindow: return "AboveWindow";
    case ErrorCode::WindowViolation: return "WindowViolation";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
  }
  return "Unknown";
}

/// Every failure in the library is reported as this exception; `code()`
/// identifies the failure class so callers can map it (e.g. to exit codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rashba_dot
