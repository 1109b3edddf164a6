#pragma once

// Optimal bounds U(A) = sup Φ and L(A) = inf Φ over an admissible set.
//
// The search runs over the reduced Dirac parametrization. For fixed atom
// positions (and band offsets) the quantity of interest and the moment
// constraints are linear in the weights, so the weights are solved exactly by
// a small linear program; positions and band offsets are explored by a
// multistart coordinate pattern search. Restart 0 is seeded from the global
// optimum of the same problem restricted to the grid (plus constraint-active
// points), the others from independent seeded random streams.

#include <cstdint>
#include <optional>
#include <vector>

#include "ouq/admissible.hpp"
#include "ouq/measure.hpp"

namespace ouq {

struct SolverOptions {
  int restarts = 32;
  int max_iters = 10'000;
  /// Stop a restart when its best value improves by less than `tol` over
  /// `stall_window` sweeps, or when the pattern step collapses.
  double tol = 1e-9;
  int stall_window = 50;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Number of Dirac atoms; defaults to reduced_parametrization().atoms.
  std::optional<std::size_t> atoms;
};

enum class SolveStatus { Converged, MaxIter };

struct RestartTrace {
  int restart = 0;
  int iterations = 0;
  double best_value = 0.0;
  bool converged = false;
};

struct SolverTrace {
  int iterations = 0;  // summed over restarts
  int restarts = 0;
  std::vector<RestartTrace> per_restart;
};

struct BoundResult {
  double value = 0.0;
  DiscreteMeasure extremizer;
  std::optional<std::vector<double>> function_values;  // one per support point with a band
  SolverTrace trace;
  SolveStatus status = SolveStatus::Converged;
};

/// Best-found sup of Φ over A; the extremizer is feasible and attains `value`.
/// Throws InfeasibleSet, DomainError (custom Φ), NumericalFailure.
BoundResult upper_bound(const AdmissibleSet& a_set, const QuantityOfInterest& phi,
                        const SolverOptions& opts = {});
BoundResult lower_bound(const AdmissibleSet& a_set, const QuantityOfInterest& phi,
                        const SolverOptions& opts = {});

enum class Certification { Safe, Unsafe, Undecided };

/// Safe iff U <= ε, Unsafe iff L > ε, Undecided otherwise.
Certification classify(double lower, double upper, double epsilon);

struct CertifyResult {
  Certification verdict = Certification::Undecided;
  BoundResult lower;
  BoundResult upper;
};

CertifyResult certify(const AdmissibleSet& a_set, const QuantityOfInterest& phi, double epsilon,
                      const SolverOptions& opts = {});

/// min(1, m/a) for 0 < m < a <= 1.
double markov_oracle(double m, double a);

const char* to_string(Certification c) noexcept;

}  // namespace ouq
