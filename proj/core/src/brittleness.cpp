#include "ouq/brittleness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ouq/error.hpp"
#include "ouq/minimax.hpp"

namespace ouq {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "brittleness", what);
}

constexpr double kSandwichSlack = 1e-9;

void check_lengths(const Prior& prior, const CandidateSet& set) {
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");
  if (prior.size() != set.size()) fail(ErrorKind::LengthMismatch, "prior length differs from candidate count");
}

std::vector<double> marginal_of(const Prior& prior, const CandidateSet& set) {
  std::vector<double> m(set.alphabet_size(), 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    for (std::uint32_t d : set.support_order(k)) m[d] += prior.weights[k] * set.likelihood(k, d);
  }
  return m;
}

}  // namespace

std::vector<double> JointTable::candidate_marginal() const {
  std::vector<double> m(rows, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t d = 0; d < cols; ++d) m[k] += at(k, d);
  }
  return m;
}

std::vector<double> JointTable::data_marginal() const {
  std::vector<double> m(cols, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t d = 0; d < cols; ++d) m[d] += at(k, d);
  }
  return m;
}

double JointTable::total() const {
  double t = 0.0;
  for (double e : entries) t += e;
  return t;
}

JointAndMarginals joint_and_marginals(const Prior& prior, const CandidateSet& set) {
  check_lengths(prior, set);
  JointAndMarginals out;
  out.joint.rows = set.size();
  out.joint.cols = set.alphabet_size();
  out.joint.entries.resize(out.joint.rows * out.joint.cols);
  for (std::size_t k = 0; k < set.size(); ++k) {
    for (std::size_t d = 0; d < set.alphabet_size(); ++d) {
      out.joint.entries[k * out.joint.cols + d] = prior.weights[k] * set.likelihood(k, d);
    }
  }
  if (std::abs(out.joint.total() - 1.0) > 1e-12) fail(ErrorKind::NumericalFailure, "joint mass differs from 1");
  const std::vector<double> cm = out.joint.candidate_marginal();
  for (std::size_t k = 0; k < cm.size(); ++k) {
    if (std::abs(cm[k] - prior.weights[k]) > 1e-12) {
      fail(ErrorKind::NumericalFailure, "candidate marginal differs from the prior");
    }
  }
  out.data_marginal.alphabet = set.alphabet();
  out.data_marginal.probabilities = out.joint.data_marginal();
  return out;
}

Estimator VersionFamily::version(const std::vector<double>& values) const {
  if (values.size() != null_atoms.size()) throw Error(ErrorKind::LengthMismatch, "brittleness", "one value per null atom");
  std::vector<double> v = base.values();
  for (std::size_t i = 0; i < null_atoms.size(); ++i) v[null_atoms[i]] = values[i];
  return Estimator::deterministic(std::move(v));
}

Estimator VersionFamily::random_version(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(free_range.lo, free_range.hi);
  std::vector<double> values(null_atoms.size());
  for (double& v : values) v = free_range.width() > 0.0 ? u(rng) : free_range.lo;
  return version(values);
}

VersionFamily version_family(const Prior& prior, const CandidateSet& set) {
  check_lengths(prior, set);
  VersionFamily fam;
  fam.base = bayes_estimator(prior, set, LossFunction::squared());
  const std::vector<double> m = marginal_of(prior, set);
  for (std::size_t d = 0; d < m.size(); ++d) {
    if (m[d] <= kNullMassThreshold) fam.null_atoms.push_back(d);
  }
  fam.free_range = Interval{set.phi_min(), set.phi_max()};
  return fam;
}

VersionGap version_gap(const Prior& pi, const Prior& pi_dagger, const CandidateSet& set) {
  check_lengths(pi, set);
  check_lengths(pi_dagger, set);
  const VersionFamily fam = version_family(pi, set);
  const double lo = fam.free_range.lo, hi = fam.free_range.hi;

  VersionGap out;
  std::vector<double> worst = std::vector<double>(fam.null_atoms.size());
  std::vector<double> best = worst;
  for (std::size_t i = 0; i < fam.null_atoms.size(); ++i) {
    const std::size_t b = fam.null_atoms[i];
    double mass = 0.0, first = 0.0;
    for (std::size_t k = 0; k < set.size(); ++k) {
      const double w = pi_dagger.weights[k] * set.likelihood(k, b);
      mass += w;
      first += w * set.phi(k);
    }
    // Atoms the second prior never reaches keep the base value.
    worst[i] = best[i] = fam.base.value(b);
    if (!(mass > 0.0)) continue;
    const double gamma_b = std::clamp(first / mass, lo, hi);
    const double far = (hi - gamma_b) >= (gamma_b - lo) ? hi : lo;
    worst[i] = far;
    best[i] = gamma_b;
    out.atoms.push_back(b);
    out.atom_mass.push_back(mass);
    out.worst_values.push_back(far);
    out.best_values.push_back(gamma_b);
    out.null_mass += mass;
    out.sup_gap += mass * (far - gamma_b) * (far - gamma_b);
  }
  if (!(out.null_mass > 0.0)) {
    fail(ErrorKind::AbsolutelyContinuous, "second prior puts no data mass on null symbols");
  }
  if (!(hi > lo)) fail(ErrorKind::DomainError, "quantity of interest is constant over the candidates");
  out.ratio = out.sup_gap / ((hi - lo) * (hi - lo) * out.null_mass);
  if (out.ratio < 0.25 - kSandwichSlack || out.ratio > 1.0 + kSandwichSlack) {
    fail(ErrorKind::NumericalFailure, "version-gap ratio outside [1/4, 1]");
  }
  out.worst_version = fam.version(worst);
  out.best_version = fam.version(best);
  return out;
}

SandwichReport sandwich_check(const Prior& pi, const Prior& pi_dagger, const CandidateSet& set) {
  SandwichReport rep;
  rep.gap = version_gap(pi, pi_dagger, set);
  rep.lower_ok = rep.gap.ratio >= 0.25 - kSandwichSlack;
  rep.upper_ok = rep.gap.ratio <= 1.0 + kSandwichSlack;
  const LossFunction loss = LossFunction::squared();
  rep.worst_risk = averaged_risk(rep.gap.worst_version, set, pi_dagger, loss);
  rep.best_risk = averaged_risk(rep.gap.best_version, set, pi_dagger, loss);
  rep.reproduced_gap = rep.worst_risk - rep.best_risk;
  return rep;
}

MidpointComparison midpoint_comparison(const Prior& pi, const Prior& pi_dagger, const CandidateSet& set) {
  check_lengths(pi, set);
  check_lengths(pi_dagger, set);
  const std::vector<double> m = marginal_of(pi, set);
  const std::vector<double> md = marginal_of(pi_dagger, set);
  double on_null = 0.0;
  for (std::size_t d = 0; d < m.size(); ++d) {
    if (m[d] <= kNullMassThreshold) on_null += md[d];
  }
  if (on_null < 1.0 - 1e-12) fail(ErrorKind::NotOrthogonal, "data laws of the two priors are not mutually singular");

  MidpointComparison out;
  out.sup_gap = version_gap(pi, pi_dagger, set).sup_gap;
  const double mid = 0.5 * (set.phi_min() + set.phi_max());
  const Estimator constant = Estimator::deterministic(std::vector<double>(set.alphabet_size(), mid));
  out.midpoint_risk = averaged_risk(constant, set, pi_dagger, LossFunction::squared());
  out.holds = out.sup_gap >= out.midpoint_risk - 1e-12;
  return out;
}

}  // namespace ouq
