#pragma once

// Admissible sets: a domain interval, generalized moment constraints and an
// optional band around a nominal response function.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ouq/measure.hpp"

namespace ouq {

/// Absolute tolerance separating round-off from genuine constraint violation.
inline constexpr double kFeasibilityTolerance = 1e-9;

enum class ConstraintRelation { LessEqual, GreaterEqual, Equal };

struct MomentConstraint {
  TabulatedFunction g;
  ConstraintRelation relation = ConstraintRelation::LessEqual;
  double bound = 0.0;

  /// Signed slack of E_mu[g]: >= 0 when satisfied, negative by the violation.
  double slack(const DiscreteMeasure& mu) const;
};

/// Admissible responses f with sup_x |f(x) - center(x)| <= half_width.
struct FunctionBand {
  TabulatedFunction center;
  double half_width = 0.0;
};

class AdmissibleSet {
 public:
  AdmissibleSet(Interval domain, std::vector<double> grid,
                std::vector<MomentConstraint> constraints = {},
                std::optional<FunctionBand> band = std::nullopt);

  const Interval& domain() const noexcept { return domain_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<MomentConstraint>& constraints() const noexcept { return constraints_; }
  const std::optional<FunctionBand>& band() const noexcept { return band_; }

  AdmissibleSet with_constraint(MomentConstraint c) const;

  /// True when some measure supported on the grid meets every constraint
  /// (solved as a phase-one linear program).
  bool probe_feasible() const;

 private:
  Interval domain_;
  std::vector<double> grid_;
  std::vector<MomentConstraint> constraints_;
  std::optional<FunctionBand> band_;
};

/// Uniform grid of `points` points over the domain (points >= 2).
std::vector<double> uniform_grid(Interval domain, std::size_t points);

/// Free-variable layout of the reduced problem: `atoms` positions in the
/// domain, `atoms` simplex weights and, with a band, one function value per
/// position constrained to [center(x) - w, center(x) + w].
struct DiracParametrization {
  std::size_t atoms = 1;
  std::size_t position_variables = 1;
  std::size_t weight_variables = 1;
  std::size_t function_variables = 0;
  Interval domain;
};

DiracParametrization reduced_parametrization(const AdmissibleSet& a_set);

struct FeasibilityReport {
  bool feasible = false;
  std::vector<double> slacks;   // one per moment constraint
  double band_violation = 0.0;  // max excess over the half-width, 0 if none
  double max_violation = 0.0;
};

/// `f` must be present iff the set has a function band (MissingFunction).
FeasibilityReport is_feasible(const DiscreteMeasure& mu, const std::optional<TabulatedFunction>& f,
                              const AdmissibleSet& a_set);

/// Variant used for optimizer output where f is only known on the support.
FeasibilityReport is_feasible_on_support(const DiscreteMeasure& mu,
                                         std::optional<std::span<const double>> f_values,
                                         const AdmissibleSet& a_set);

struct LatticeSpec {
  double weight_step = 0.5;
  /// Either explicit positions or a step from the domain's lower end.
  std::optional<std::vector<double>> positions;
  double position_step = 0.5;
  /// Function offsets per atom in the band, uniformly spaced over [-w, w].
  std::size_t band_levels = 3;
  std::size_t cap = 100'000;
};

struct AdmissibleCandidate {
  DiscreteMeasure measure;
  std::optional<std::vector<double>> function_values;  // one per support point
};

/// All feasible lattice measures, ordered lexicographically by weight vector
/// over the lattice positions. Throws CandidateCapExceeded, EmptyEnumeration.
std::vector<AdmissibleCandidate> enumerate_candidates(const AdmissibleSet& a_set,
                                                      const LatticeSpec& lattice);

}  // namespace ouq
