#include "ouq/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ouq/error.hpp"

namespace ouq {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "confidence", what);
}

constexpr double kBisectionWidth = 1e-6;
constexpr double kMonotoneSlack = 1e-9;

// Per symbol, the centre of the Φ-range of candidates that can emit it.
Estimator chebyshev_estimator(const CandidateSet& set) {
  std::vector<double> lo(set.alphabet_size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(set.alphabet_size(), -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < set.size(); ++k) {
    for (std::uint32_t d : set.support_order(k)) {
      lo[d] = std::min(lo[d], set.phi(k));
      hi[d] = std::max(hi[d], set.phi(k));
    }
  }
  std::vector<double> values(set.alphabet_size());
  const double mid = 0.5 * (set.phi_min() + set.phi_max());
  for (std::size_t d = 0; d < values.size(); ++d) values[d] = lo[d] <= hi[d] ? 0.5 * (lo[d] + hi[d]) : mid;
  return Estimator::deterministic(std::move(values));
}

double worst_abs_deviation(const Estimator& theta, const CandidateSet& set) {
  double worst = 0.0;
  for (std::size_t k = 0; k < set.size(); ++k) {
    for (std::uint32_t d : set.support_order(k)) worst = std::max(worst, std::abs(theta.value(d) - set.phi(k)));
  }
  return worst;
}

}  // namespace

double threshold_game_value(double gamma, const CandidateSet& set, const GameOptions& opts) {
  if (!(gamma > 0.0)) fail(ErrorKind::DomainError, "gamma must be positive");
  return minimax_estimator(set, LossFunction::threshold(gamma), opts).minimax_value;
}

std::pair<double, double> ConfidenceResult::interval(std::size_t d) const {
  const double c = estimator.value(d);
  return {c - gamma_eps, c + gamma_eps};
}

ConfidenceResult optimal_confidence_interval(double epsilon, const CandidateSet& set, const GameOptions& opts) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail(ErrorKind::DomainError, "epsilon must lie in [0, 1]");
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");

  ConfidenceResult res;
  res.epsilon = epsilon;
  const double range = set.phi_max() - set.phi_min();
  if (range == 0.0) {
    res.estimator = Estimator::deterministic(std::vector<double>(set.alphabet_size(), set.phi_min()));
    res.randomized_estimator = res.estimator;
    return res;
  }

  const auto solve = [&](double gamma) {
    GameSolution g = minimax_estimator(set, LossFunction::threshold(gamma), opts);
    res.bisection_trace.emplace_back(gamma, g.minimax_value);
    return g;
  };

  double lo = 0.0, hi = range;
  GameSolution at_hi = solve(hi);
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    GameSolution g = solve(mid);
    if (g.minimax_value <= epsilon) {
      hi = mid;
      at_hi = std::move(g);
    } else {
      lo = mid;
    }
  }

  std::vector<std::pair<double, double>> sorted = res.bisection_trace;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].second > sorted[i - 1].second + kMonotoneSlack) {
      fail(ErrorKind::NonMonotoneDetected, "game value increased along gamma");
    }
  }

  res.gamma_eps = hi;
  res.game_value_at_gamma = at_hi.minimax_value;
  res.game_converged = at_hi.status == GameStatus::Converged;
  res.randomized_estimator = at_hi.estimator;

  // Deterministic rounding: smallest worst-case miss probability, then
  // smallest worst-case absolute deviation.
  const LossFunction loss = LossFunction::threshold(hi);
  std::vector<Estimator> pool = at_hi.support_estimators;
  pool.push_back(chebyshev_estimator(set));
  double best_risk = std::numeric_limits<double>::infinity();
  double best_dev = std::numeric_limits<double>::infinity();
  for (const Estimator& e : pool) {
    const double r = worst_case_error(e, set, loss).value;
    const double dev = worst_abs_deviation(e, set);
    if (r < best_risk - 1e-12 || (r <= best_risk + 1e-12 && dev < best_dev)) {
      best_risk = std::min(best_risk, r);
      best_dev = dev;
      res.estimator = e;
    }
  }
  res.rounded_value = worst_case_error(res.estimator, set, loss).value;
  return res;
}

std::string curve_csv(const ConfidenceResult& result) {
  std::vector<std::pair<double, double>> sorted = result.bisection_trace;
  std::sort(sorted.begin(), sorted.end());
  std::string out = "gamma,value\n";
  char buf[64];
  for (const auto& [g, v] : sorted) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g, v);
    out += buf;
  }
  return out;
}

double midpoint_estimator(const AdmissibleSet& a_set, const QuantityOfInterest& phi, const SolverOptions& opts) {
  const double lower = lower_bound(a_set, phi, opts).value;
  const double upper = upper_bound(a_set, phi, opts).value;
  return 0.5 * (lower + upper);
}

}  // namespace ouq
