#pragma once

// Joint laws of (candidate, data) under a prior, the family of versions of
// the posterior mean, and the version-gap ratio between two priors.

#include <cstdint>
#include <vector>

#include "ouq/measure.hpp"
#include "ouq/risk.hpp"

namespace ouq {

/// Symbols whose data-marginal mass is at most this are treated as null.
inline constexpr double kNullMassThreshold = 1e-15;

struct JointTable {
  std::size_t rows = 0;  // candidates
  std::size_t cols = 0;  // data symbols
  std::vector<double> entries;  // row-major, prior_k * L_k(d)

  double at(std::size_t k, std::size_t d) const noexcept { return entries[k * cols + d]; }
  std::vector<double> candidate_marginal() const;
  std::vector<double> data_marginal() const;
  double total() const;
};

struct JointAndMarginals {
  JointTable joint;
  DataDistribution data_marginal;
};

/// Throws LengthMismatch, NumericalFailure (marginals inconsistent).
JointAndMarginals joint_and_marginals(const Prior& prior, const CandidateSet& set);

/// Posterior means that agree off the prior's null symbols.
struct VersionFamily {
  Estimator base;
  std::vector<std::size_t> null_atoms;
  Interval free_range;

  /// base with `values[i]` at null_atoms[i].
  Estimator version(const std::vector<double>& values) const;
  /// Null-atom values drawn uniformly from free_range.
  Estimator random_version(std::uint64_t seed) const;
};

VersionFamily version_family(const Prior& prior, const CandidateSet& set);

struct VersionGap {
  double sup_gap = 0.0;
  double ratio = 0.0;
  double null_mass = 0.0;              // second prior's data mass on the null symbols
  std::vector<std::size_t> atoms;      // null symbols with positive second-prior mass
  std::vector<double> atom_mass;
  std::vector<double> worst_values;    // far endpoint per atom
  std::vector<double> best_values;     // conditional mean per atom
  Estimator worst_version;
  Estimator best_version;
};

/// Largest squared-loss risk difference, under `pi_dagger`, between two
/// versions of the posterior mean of `pi`, and its normalized ratio.
/// Throws AbsolutelyContinuous, DomainError (constant Φ), NumericalFailure.
VersionGap version_gap(const Prior& pi, const Prior& pi_dagger, const CandidateSet& set);

struct SandwichReport {
  VersionGap gap;
  bool lower_ok = false;
  bool upper_ok = false;
  double worst_risk = 0.0;  // risk of gap.worst_version under pi_dagger
  double best_risk = 0.0;
  double reproduced_gap = 0.0;
};

SandwichReport sandwich_check(const Prior& pi, const Prior& pi_dagger, const CandidateSet& set);

struct MidpointComparison {
  double sup_gap = 0.0;
  double midpoint_risk = 0.0;
  bool holds = false;
};

/// Requires the second prior's data law to live on the first prior's null
/// symbols (NotOrthogonal otherwise).
MidpointComparison midpoint_comparison(const Prior& pi, const Prior& pi_dagger, const CandidateSet& set);

}  // namespace ouq
