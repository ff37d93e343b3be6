#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace structnil {

enum class ErrorCode {
  DivisionByZero,
  FieldMismatch,
  ParseError,
  NoSolution,
  DimensionMismatch,
  KindMismatch,
  CharTwoUnsupported,
  DegenerateForm,
  NonIsotropicVector,
  ZeroVector,
  NotNilpotent,
  PreconditionViolated,
  FlagNotSingular,
  FlagNotMaximal,
  UnsupportedExtension,
  HypothesisUnmet,
  CommonKernelEmpty,
  NoIsotropicCommonKernelVector,
  VerificationFailed,
  BadParameters,
  CertificateFailed,
  BudgetExceeded,
};

std::string_view error_name(ErrorCode code);

/// Every library failure is reported through this exception; `code()` is the
/// machine-readable tag that the CLI forwards into its JSON error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_name(code)) + ": " + what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace structnil
