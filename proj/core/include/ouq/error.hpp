#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ouq {

/// Every failure the library reports. The CLI prints the name and the module
/// that raised it.
enum class ErrorKind {
  NegativeWeight,
  PointOutsideDomain,
  ZeroTotalMass,
  LengthMismatch,
  UndefinedAtSupport,
  AlphabetTooLarge,
  MissingFunction,
  CandidateCapExceeded,
  EmptyEnumeration,
  InfeasibleSet,
  NumericalFailure,
  DomainError,
  AlphabetMismatch,
  EmptyCandidates,
  DegeneratePrior,
  NonConvergence,
  NonConvexLoss,
  NonMonotoneDetected,
  AbsolutelyContinuous,
  NotOrthogonal,
  ParseError,
  SchemaError,
  InfeasibleProbe,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace ouq
