#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace congsub {

/// Failure categories shared by every module. The CLI maps them to exit codes.
enum class ErrorKind {
  InvalidModulus,
  ModulusMismatch,
  NonUnit,
  PrecisionExceeded,
  PrecisionExhausted,
  DomainViolation,
  UnsupportedPrime,
  UnsupportedPrecision,
  ClosureBudgetExceeded,
  BudgetExceeded,
  DegenerateSpan,
  NoUnitDerivative,
  Degenerate,
  NotSurjective,
  BracketClosureAnomaly,
  PreconditionViolation,
  ZeroModP,
  ZeroPolynomial,
  IdenticallyZeroOnV,
  ParseError,
  /// An internal postcondition or cross-check did not hold.
  AssertionFailure,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  bool is_budget() const noexcept {
    return kind_ == ErrorKind::ClosureBudgetExceeded || kind_ == ErrorKind::BudgetExceeded;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace congsub
