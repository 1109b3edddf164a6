#include "ouq/error.hpp"

namespace ouq {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorKind::ZeroTotalMass: return "ZeroTotalMass";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::UndefinedAtSupport: return "UndefinedAtSupport";
    case ErrorKind::AlphabetTooLarge: return "AlphabetTooLarge";
    case ErrorKind::MissingFunction: return "MissingFunction";
    case ErrorKind::CandidateCapExceeded: return "CandidateCapExceeded";
    case ErrorKind::EmptyEnumeration: return "EmptyEnumeration";
    case ErrorKind::InfeasibleSet: return "InfeasibleSet";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::EmptyCandidates: return "EmptyCandidates";
    case ErrorKind::DegeneratePrior: return "DegeneratePrior";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NonConvexLoss: return "NonConvexLoss";
    case ErrorKind::NonMonotoneDetected: return "NonMonotoneDetected";
    case ErrorKind::AbsolutelyContinuous: return "AbsolutelyContinuous";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InfeasibleProbe: return "InfeasibleProbe";
  }
  return "Unknown";
}

}  // namespace ouq
