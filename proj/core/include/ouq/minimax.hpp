#pragma once

// The statistician-versus-nature decision game over a finite candidate family:
// Bayes estimators, least favorable priors, minimax estimators with duality
// certificates, experiment comparison and estimator mixing.

#include <cstdint>
#include <span>
#include <vector>

#include "ouq/risk.hpp"

namespace ouq {

struct GameOptions {
  /// Projected-gradient iterations for the squared-loss prior ascent.
  int max_iters = 5'000;
  /// Stop the ascent once the gradient mapping norm falls below this.
  double gradient_tol = 1e-9;
  /// A solution is certified when its duality gap is at most this.
  double certificate_tol = 1e-6;
  /// Double-oracle improvement threshold and round limit (threshold loss).
  double oracle_tol = 1e-9;
  int max_oracle_rounds = 1'000;
  /// Uniform decision grid over [min Φ, max Φ] carried by randomized kernels.
  std::size_t decision_grid = 101;
};

enum class GameStatus { Converged, NonConverged };

struct GameSolution {
  Estimator estimator;
  Prior least_favorable_prior;
  double minimax_value = 0.0;  // worst-case risk of `estimator`
  double maximin_value = 0.0;  // Bayes risk of `least_favorable_prior`
  double duality_gap = 0.0;
  int iterations = 0;
  GameStatus status = GameStatus::Converged;
  /// Prior-ascent objective per iteration (squared loss) or restricted game
  /// value per double-oracle round (threshold loss).
  std::vector<double> trajectory;
  /// Threshold loss: the pure estimators mixed by `estimator` and their weights.
  std::vector<Estimator> support_estimators;
  std::vector<double> support_weights;
};

/// Posterior mean (squared loss) or posterior-mass-maximizing interval centre
/// (threshold loss). Symbols with zero marginal take the prior mean of Φ.
/// Throws DegeneratePrior, LengthMismatch.
Estimator bayes_estimator(const Prior& prior, const CandidateSet& set, const LossFunction& loss);

/// Bayes risk of the prior: averaged risk of its own Bayes estimator.
double bayes_risk(const Prior& prior, const CandidateSet& set, const LossFunction& loss);

struct LeastFavorable {
  Prior prior;
  double bayes_risk = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trajectory;
};

LeastFavorable least_favorable_prior(const CandidateSet& set, const LossFunction& loss,
                                     const GameOptions& opts = {});

/// Squared loss: Bayes estimator of the least favorable prior found by
/// projected-gradient ascent with an active-set Newton polish. Threshold
/// loss: double oracle over pure estimators and candidates, restricted games
/// solved as linear programs; the estimator is then randomized.
GameSolution minimax_estimator(const CandidateSet& set, const LossFunction& loss,
                               const GameOptions& opts = {});

enum class ExperimentPreference { FirstPreferable, SecondPreferable, Equivalent };

struct ExperimentComparison {
  ExperimentPreference preference = ExperimentPreference::Equivalent;
  GameSolution first;
  GameSolution second;
};

/// Re-applies each data map to the candidates' measures and compares the two
/// game values; Equivalent within 1e-9.
ExperimentComparison compare_experiments(const DataMap& first, const DataMap& second,
                                         std::span<const Candidate> candidates,
                                         const LossFunction& loss, const GameOptions& opts = {});

struct MixResult {
  std::vector<double> alpha;
  double value = 0.0;
  std::vector<double> vertex_values;
};

/// Simplex weights minimizing the worst-case risk of Σ alpha_i θ_i.
/// Throws NonConvexLoss for the threshold loss.
MixResult mix_estimators(std::span<const Estimator> thetas, const CandidateSet& set,
                         const LossFunction& loss, int iterations = 4'000);

const char* to_string(ExperimentPreference p) noexcept;

}  // namespace ouq
