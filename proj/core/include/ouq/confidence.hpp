#pragma once

// Smallest data-dependent intervals [θ(d) - γ, θ(d) + γ] that contain the
// quantity of interest with probability at least 1 - ε for every candidate.

#include <string>
#include <utility>
#include <vector>

#include "ouq/admissible.hpp"
#include "ouq/minimax.hpp"
#include "ouq/ouq_solver.hpp"
#include "ouq/risk.hpp"

namespace ouq {

/// inf over (randomized) estimators of the worst-case probability of missing
/// Φ by at least gamma. Requires gamma > 0.
double threshold_game_value(double gamma, const CandidateSet& set, const GameOptions& opts = {});

struct ConfidenceResult {
  double gamma_eps = 0.0;
  double epsilon = 0.0;
  /// Deterministic rounding of the mixed game solution at gamma_eps.
  Estimator estimator;
  double rounded_value = 0.0;  // worst-case miss probability of `estimator`
  /// Mixed solution and its game value at gamma_eps.
  Estimator randomized_estimator;
  double game_value_at_gamma = 0.0;
  bool game_converged = true;
  /// (γ, game value) for every evaluation, in evaluation order.
  std::vector<std::pair<double, double>> bisection_trace;

  /// [θ(d) - γ_ε, θ(d) + γ_ε] for symbol d.
  std::pair<double, double> interval(std::size_t d) const;
};

/// Bisection on γ over [0, max Φ - min Φ] to width 1e-6. Throws DomainError
/// (ε outside [0, 1]) and NonMonotoneDetected.
ConfidenceResult optimal_confidence_interval(double epsilon, const CandidateSet& set,
                                             const GameOptions& opts = {});

/// Bisection trace as "gamma,value" CSV, sorted by γ.
std::string curve_csv(const ConfidenceResult& result);

/// (L(A) + U(A)) / 2 from the optimal bounds.
double midpoint_estimator(const AdmissibleSet& a_set, const QuantityOfInterest& phi,
                          const SolverOptions& opts = {});

}  // namespace ouq
