#include "ouq/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ouq/error.hpp"
#include "ouq/linprog.hpp"

namespace ouq {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "admissible", what);
}

lp::Relation to_lp(ConstraintRelation r) {
  switch (r) {
    case ConstraintRelation::LessEqual: return lp::Relation::LessEqual;
    case ConstraintRelation::GreaterEqual: return lp::Relation::GreaterEqual;
    case ConstraintRelation::Equal: return lp::Relation::Equal;
  }
  return lp::Relation::Equal;
}

}  // namespace

double MomentConstraint::slack(const DiscreteMeasure& mu) const {
  const double value = moment(mu, g);
  switch (relation) {
    case ConstraintRelation::LessEqual: return bound - value;
    case ConstraintRelation::GreaterEqual: return value - bound;
    case ConstraintRelation::Equal: return -std::abs(value - bound);
  }
  return 0.0;
}

AdmissibleSet::AdmissibleSet(Interval domain, std::vector<double> grid,
                             std::vector<MomentConstraint> constraints,
                             std::optional<FunctionBand> band)
    : domain_(domain),
      grid_(std::move(grid)),
      constraints_(std::move(constraints)),
      band_(std::move(band)) {
  if (!(domain_.hi >= domain_.lo)) fail(ErrorKind::DomainError, "empty domain");
  if (grid_.empty()) fail(ErrorKind::DomainError, "grid must be nonempty");
  std::sort(grid_.begin(), grid_.end());
  grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());
  for (double x : grid_) {
    if (!domain_.contains(x)) fail(ErrorKind::PointOutsideDomain, "grid point outside domain");
  }
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.bound)) fail(ErrorKind::DomainError, "constraint bound must be finite");
  }
  if (band_ && !(band_->half_width >= 0.0)) {
    fail(ErrorKind::DomainError, "band half-width must be nonnegative");
  }
}

AdmissibleSet AdmissibleSet::with_constraint(MomentConstraint c) const {
  auto cs = constraints_;
  cs.push_back(std::move(c));
  return AdmissibleSet(domain_, grid_, std::move(cs), band_);
}

bool AdmissibleSet::probe_feasible() const {
  lp::Problem p;
  p.objective.assign(grid_.size(), 0.0);
  p.add_row(std::vector<double>(grid_.size(), 1.0), lp::Relation::Equal, 1.0);
  for (const auto& c : constraints_) {
    std::vector<double> row(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) row[i] = c.g(grid_[i]);
    p.add_row(std::move(row), to_lp(c.relation), c.bound);
  }
  return lp::maximize(p).status == lp::Status::Optimal;
}

std::vector<double> uniform_grid(Interval domain, std::size_t points) {
  if (points < 2) return {domain.lo};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = domain.lo + domain.width() * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  g.back() = domain.hi;
  return g;
}

DiracParametrization reduced_parametrization(const AdmissibleSet& a_set) {
  DiracParametrization p;
  p.atoms = a_set.constraints().size() + 1;
  p.position_variables = p.atoms;
  p.weight_variables = p.atoms;
  p.function_variables = a_set.band() ? p.atoms : 0;
  p.domain = a_set.domain();
  return p;
}

FeasibilityReport is_feasible_on_support(const DiscreteMeasure& mu,
                                         std::optional<std::span<const double>> f_values,
                                         const AdmissibleSet& a_set) {
  if (a_set.band().has_value() != f_values.has_value()) {
    fail(ErrorKind::MissingFunction, "a function is required exactly when the set has a band");
  }
  FeasibilityReport r;
  for (const auto& c : a_set.constraints()) {
    const double s = c.slack(mu);
    r.slacks.push_back(s);
    r.max_violation = std::max(r.max_violation, -s);
  }
  if (f_values) {
    if (f_values->size() != mu.size()) fail(ErrorKind::LengthMismatch, "one function value per atom");
    const auto& band = *a_set.band();
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double excess = std::abs((*f_values)[i] - band.center(mu.support()[i])) - band.half_width;
      r.band_violation = std::max(r.band_violation, excess);
    }
    r.max_violation = std::max(r.max_violation, r.band_violation);
  }
  r.feasible = r.max_violation <= kFeasibilityTolerance;
  return r;
}

FeasibilityReport is_feasible(const DiscreteMeasure& mu, const std::optional<TabulatedFunction>& f,
                              const AdmissibleSet& a_set) {
  if (a_set.band().has_value() != f.has_value()) {
    fail(ErrorKind::MissingFunction, "a function is required exactly when the set has a band");
  }
  if (!f) return is_feasible_on_support(mu, std::nullopt, a_set);

  std::vector<double> at_support;
  for (double x : mu.support()) at_support.push_back((*f)(x));
  FeasibilityReport r = is_feasible_on_support(mu, std::span<const double>(at_support), a_set);
  const auto& band = *a_set.band();
  for (double x : a_set.grid()) {
    const double excess = std::abs((*f)(x) - band.center(x)) - band.half_width;
    r.band_violation = std::max(r.band_violation, excess);
  }
  r.max_violation = std::max(r.max_violation, r.band_violation);
  r.feasible = r.max_violation <= kFeasibilityTolerance;
  return r;
}

std::vector<AdmissibleCandidate> enumerate_candidates(const AdmissibleSet& a_set,
                                                      const LatticeSpec& lattice) {
  if (!(lattice.weight_step > 0.0)) fail(ErrorKind::DomainError, "positive step required");
  const double steps = 1.0 / lattice.weight_step;
  const long levels = std::lround(steps);
  if (levels < 1 || std::abs(steps - static_cast<double>(levels)) > 1e-9) {
    fail(ErrorKind::DomainError, "weight step must divide 1");
  }

  std::vector<double> positions;
  if (lattice.positions) {
    positions = *lattice.positions;
  } else {
    if (!(lattice.position_step > 0.0)) fail(ErrorKind::DomainError, "positive step required");
    const Interval d = a_set.domain();
    for (long i = 0;; ++i) {
      const double x = d.lo + static_cast<double>(i) * lattice.position_step;
      if (x > d.hi + 1e-12) break;
      positions.push_back(std::min(x, d.hi));
    }
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  for (double x : positions) {
    if (!a_set.domain().contains(x)) fail(ErrorKind::PointOutsideDomain, "lattice position outside domain");
  }

  const std::size_t p = positions.size();
  if (multiset_count(p, static_cast<int>(levels)) > static_cast<double>(lattice.cap)) {
    fail(ErrorKind::CandidateCapExceeded, "weight lattice exceeds candidate cap");
  }

  const auto& band = a_set.band();
  std::vector<double> offsets{0.0};
  if (band) {
    offsets.clear();
    const std::size_t nl = std::max<std::size_t>(lattice.band_levels, 1);
    for (std::size_t i = 0; i < nl; ++i) {
      offsets.push_back(nl == 1 ? 0.0
                                : -band->half_width + 2.0 * band->half_width * static_cast<double>(i) /
                                                          static_cast<double>(nl - 1));
    }
  }

  std::vector<AdmissibleCandidate> out;
  std::vector<long> counts(p, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i + 1 == p) {
      counts[i] = left;
      std::vector<double> pts, ws;
      for (std::size_t j = 0; j < p; ++j) {
        if (counts[j] > 0) {
          pts.push_back(positions[j]);
          ws.push_back(static_cast<double>(counts[j]) / static_cast<double>(levels));
        }
      }
      DiscreteMeasure mu = make_measure(pts, ws, a_set.domain());
      if (!band) {
        if (is_feasible_on_support(mu, std::nullopt, a_set).feasible) out.push_back({mu, std::nullopt});
        return;
      }
      // Product of offset levels over the support atoms.
      std::vector<std::size_t> idx(mu.size(), 0);
      while (true) {
        std::vector<double> fv(mu.size());
        for (std::size_t j = 0; j < mu.size(); ++j) fv[j] = band->center(mu.support()[j]) + offsets[idx[j]];
        if (is_feasible_on_support(mu, std::span<const double>(fv), a_set).feasible) {
          out.push_back({mu, fv});
          if (out.size() > lattice.cap) fail(ErrorKind::CandidateCapExceeded, "candidate cap exceeded");
        }
        std::size_t j = 0;
        while (j < idx.size() && ++idx[j] == offsets.size()) idx[j++] = 0;
        if (j == idx.size()) break;
      }
      return;
    }
    // Ascending lexicographic order of the count vector.
    for (long c = 0; c <= left; ++c) {
      counts[i] = c;
      rec(i + 1, left - c);
    }
  };
  if (p > 0) rec(0, levels);
  if (out.empty()) fail(ErrorKind::EmptyEnumeration, "no feasible lattice candidate");
  return out;
}

}  // namespace ouq
