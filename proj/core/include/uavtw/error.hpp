#pragma once

#include <stdexcept>
#include <string>

namespace uavtw {

enum class ErrorKind {
  kInvalidArgument,
  kTooLarge,
  kInfeasibleInput,
  kInfeasibleRicianRegime,
  kNumericFailure,
  kParse,
  kValidation,
  kIo,
  kUsage,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kTooLarge: return "too-large";
    case ErrorKind::kInfeasibleInput: return "infeasible-input";
    case ErrorKind::kInfeasibleRicianRegime: return "infeasible-rician-regime";
    case ErrorKind::kNumericFailure: return "numeric-failure";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kValidation: return "validation-error";
    case ErrorKind::kIo: return "io-error";
    case ErrorKind::kUsage: return "usage-error";
  }
  return "unknown";
}

}  // namespace uavtw
