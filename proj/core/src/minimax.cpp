#include "ouq/minimax.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "ouq/error.hpp"
#include "ouq/linprog.hpp"
#include "ouq/simplex.hpp"

namespace ouq {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "minimax_game", what);
}

void check_prior(const Prior& prior, const CandidateSet& set) {
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");
  if (prior.size() != set.size()) fail(ErrorKind::LengthMismatch, "prior length differs from candidate count");
}

double prior_mean(std::span<const double> pi, const CandidateSet& set) {
  double m = 0.0;
  for (std::size_t k = 0; k < set.size(); ++k) m += pi[k] * set.phi(k);
  return m;
}

std::vector<double> data_marginal(std::span<const double> pi, const CandidateSet& set) {
  std::vector<double> marginal(set.alphabet_size(), 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (pi[k] <= 0.0) continue;
    for (std::uint32_t d : set.support_order(k)) marginal[d] += pi[k] * set.likelihood(k, d);
  }
  return marginal;
}

// ---------------------------------------------------------------------------
// Squared loss: Bayes risk R(π) = Σ_k π_k Σ_d L_k(d) (θ_π(d) - Φ_k)^2 is
// concave in π, and its partial derivative in π_k is the risk of θ_π at
// candidate k (symbols with zero marginal contribute nothing).

struct SquaredState {
  std::vector<double> marginal;
  std::vector<double> theta;  // NaN where the marginal vanishes
  std::vector<double> grad;
  double value = 0.0;
  double fw_gap = 0.0;  // max_k grad_k - value
};

SquaredState evaluate_squared(const CandidateSet& set, std::span<const double> pi) {
  SquaredState s;
  const std::size_t dsize = set.alphabet_size();
  s.marginal.assign(dsize, 0.0);
  std::vector<double> num(dsize, 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (pi[k] <= 0.0) continue;
    for (std::uint32_t d : set.support_order(k)) {
      const double w = pi[k] * set.likelihood(k, d);
      s.marginal[d] += w;
      num[d] += w * set.phi(k);
    }
  }
  s.theta.assign(dsize, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t d = 0; d < dsize; ++d) {
    if (s.marginal[d] > 0.0) s.theta[d] = num[d] / s.marginal[d];
  }
  s.grad.assign(set.size(), 0.0);
  for (std::size_t k = 0; k < set.size(); ++k) {
    double g = 0.0;
    for (std::uint32_t d : set.support_order(k)) {
      if (s.marginal[d] > 0.0) {
        const double e = s.theta[d] - set.phi(k);
        g += set.likelihood(k, d) * e * e;
      }
    }
    s.grad[k] = g;
  }
  s.value = 0.0;
  for (std::size_t k = 0; k < set.size(); ++k) s.value += pi[k] * s.grad[k];
  s.fw_gap = *std::max_element(s.grad.begin(), s.grad.end()) - s.value;
  return s;
}

// Newton's method on the equalization conditions grad_k(π) = v (k in S),
// Σ_S π_k = 1. Components that hit zero leave the active set.
std::vector<double> newton_polish(const CandidateSet& set, std::vector<double> pi,
                                  std::vector<std::size_t> active, double scale) {
  const std::size_t dsize = set.alphabet_size();
  double v = evaluate_squared(set, pi).value;
  for (int iter = 0; iter < 40 && !active.empty(); ++iter) {
    const SquaredState st = evaluate_squared(set, pi);
    const std::size_t s = active.size();
    Eigen::VectorXd residual(static_cast<Eigen::Index>(s + 1));
    double mass = 0.0;
    for (std::size_t a = 0; a < s; ++a) {
      residual(static_cast<Eigen::Index>(a)) = st.grad[active[a]] - v;
      mass += pi[active[a]];
    }
    residual(static_cast<Eigen::Index>(s)) = mass - 1.0;
    if (residual.lpNorm<Eigen::Infinity>() <= 1e-15 * scale) break;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s + 1),
                                                static_cast<Eigen::Index>(s + 1));
    for (std::size_t d = 0; d < dsize; ++d) {
      if (!(st.marginal[d] > 0.0)) continue;
      for (std::size_t a = 0; a < s; ++a) {
        const std::size_t k = active[a];
        const double lk = set.likelihood(k, d);
        if (lk == 0.0) continue;
        const double ek = st.theta[d] - set.phi(k);
        for (std::size_t b = 0; b < s; ++b) {
          const std::size_t j = active[b];
          const double lj = set.likelihood(j, d);
          if (lj == 0.0) continue;
          jac(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) -=
              2.0 * lk * lj * ek * (st.theta[d] - set.phi(j)) / st.marginal[d];
        }
      }
    }
    for (std::size_t a = 0; a < s; ++a) {
      jac(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(s)) = -1.0;
      jac(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) = 1.0;
    }
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-residual);
    if (!step.allFinite()) break;

    double alpha = 1.0;
    std::size_t blocking = s;
    for (std::size_t a = 0; a < s; ++a) {
      const double dp = step(static_cast<Eigen::Index>(a));
      if (dp < 0.0 && pi[active[a]] + alpha * dp < 0.0) {
        alpha = -pi[active[a]] / dp;
        blocking = a;
      }
    }
    for (std::size_t a = 0; a < s; ++a) {
      pi[active[a]] = std::max(0.0, pi[active[a]] + alpha * step(static_cast<Eigen::Index>(a)));
    }
    v += alpha * step(static_cast<Eigen::Index>(s));
    if (blocking < s) {
      pi[active[blocking]] = 0.0;
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(blocking));
    }
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    if (!(total > 0.0)) break;
    for (double& p : pi) p /= total;
  }
  return pi;
}

// Tries to finish the ascent exactly: Newton on the current support, growing
// it by the most violated candidate when needed.
std::optional<std::vector<double>> polish(const CandidateSet& set, const std::vector<double>& pi,
                                          double scale, double current_gap) {
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    if (pi[k] > 1e-10) active.push_back(k);
  }
  std::optional<std::vector<double>> best;
  double best_gap = current_gap;
  for (std::size_t attempt = 0; attempt <= set.size(); ++attempt) {
    std::vector<double> start = pi;
    for (std::size_t k = 0; k < start.size(); ++k) {
      if (std::find(active.begin(), active.end(), k) == active.end()) start[k] = 0.0;
    }
    const double total = std::accumulate(start.begin(), start.end(), 0.0);
    if (!(total > 0.0)) break;
    for (double& p : start) p /= total;
    std::vector<double> cand = newton_polish(set, start, active, scale);
    const SquaredState st = evaluate_squared(set, cand);
    if (st.fw_gap < best_gap) {
      best_gap = st.fw_gap;
      best = cand;
    }
    if (st.fw_gap <= 1e-14 * scale) break;
    const std::size_t worst = static_cast<std::size_t>(
        std::max_element(st.grad.begin(), st.grad.end()) - st.grad.begin());
    if (std::find(active.begin(), active.end(), worst) != active.end()) break;
    active.push_back(worst);
    std::sort(active.begin(), active.end());
  }
  return best;
}

LeastFavorable ascend_squared(const CandidateSet& set, const GameOptions& opts) {
  const std::size_t n = set.size();
  const double range = set.phi_max() - set.phi_min();
  const double scale = std::max(range * range, std::numeric_limits<double>::min());

  LeastFavorable out;
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  SquaredState st = evaluate_squared(set, pi);
  out.trajectory.push_back(st.value);
  if (range == 0.0 || n == 1) {
    // Φ is known exactly, so every prior has zero Bayes risk.
    out.prior = Prior(pi);
    out.bayes_risk = 0.0;
    out.converged = true;
    return out;
  }

  double eta = 1.0 / scale;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    if (st.fw_gap <= 1e-14 * scale) {
      out.converged = true;
      break;
    }
    std::vector<double> cand;
    SquaredState cst;
    double step_norm = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      std::vector<double> moved(n);
      for (std::size_t k = 0; k < n; ++k) moved[k] = pi[k] + eta * st.grad[k];
      cand = project_to_simplex(moved);
      cst = evaluate_squared(set, cand);
      double lin = 0.0, sq = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double dk = cand[k] - pi[k];
        lin += st.grad[k] * dk;
        sq += dk * dk;
      }
      step_norm = std::sqrt(sq);
      if (cst.value >= st.value + lin - sq / (2.0 * eta) - 1e-15 * scale) {
        accepted = true;
        break;
      }
      eta /= 2.0;
    }
    if (!accepted) break;
    const double grad_map = step_norm / eta;
    pi = std::move(cand);
    st = std::move(cst);
    out.trajectory.push_back(st.value);
    eta *= 1.5;

    if (iter % 20 == 19 || grad_map <= opts.gradient_tol * scale) {
      if (auto polished = polish(set, pi, scale, st.fw_gap)) {
        pi = std::move(*polished);
        st = evaluate_squared(set, pi);
        out.trajectory.push_back(st.value);
      }
    }
    if (grad_map <= opts.gradient_tol * scale && st.fw_gap <= opts.certificate_tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = iter;
  if (!out.converged) out.converged = st.fw_gap <= opts.certificate_tol;
  out.prior = Prior(pi);
  out.bayes_risk = st.value;
  return out;
}

// Squared-loss version of θ_π that is best for the worst case on symbols the
// prior never produces: each such coordinate is chosen by golden-section
// search on the maximum risk.
Estimator minimax_version(const CandidateSet& set, const Prior& prior) {
  const SquaredState st = evaluate_squared(set, prior.weights);
  std::vector<double> theta = st.theta;
  std::vector<std::size_t> null_symbols;
  const double fill = prior_mean(prior.weights, set);
  for (std::size_t d = 0; d < theta.size(); ++d) {
    if (!(st.marginal[d] > 0.0)) {
      theta[d] = fill;
      null_symbols.push_back(d);
    }
  }
  if (null_symbols.empty()) return Estimator::deterministic(std::move(theta));

  const auto worst = [&](const std::vector<double>& t) {
    const Estimator e = Estimator::deterministic(t);
    return worst_case_error(e, set, LossFunction::squared()).value;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (std::size_t d : null_symbols) {
      double a = set.phi_min(), b = set.phi_max();
      for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        const double c = b - invphi * (b - a), e = a + invphi * (b - a);
        theta[d] = c;
        const double fc = worst(theta);
        theta[d] = e;
        const double fe = worst(theta);
        if (fc <= fe) b = e;
        else a = c;
      }
      theta[d] = 0.5 * (a + b);
    }
  }
  return Estimator::deterministic(std::move(theta));
}

// ---------------------------------------------------------------------------
// Threshold loss

class ThresholdOracle {
 public:
  ThresholdOracle(const CandidateSet& set, double gamma) : set_(set), gamma_(gamma) {
    by_phi_.resize(set.size());
    std::iota(by_phi_.begin(), by_phi_.end(), 0);
    std::stable_sort(by_phi_.begin(), by_phi_.end(),
                     [&](std::size_t a, std::size_t b) { return set.phi(a) < set.phi(b); });
  }

  // Centre of the open interval of half-width γ capturing the most weight.
  double best_decision(std::span<const double> w) const {
    const std::size_t n = by_phi_.size();
    double best = -1.0, mass = 0.0;
    std::size_t bi = 0, bj = 0, j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (j <= i) {
        j = i;
        mass = 0.0;
      }
      // The window test must agree with the loss at the window centre.
      while (j > i + 1 && !captures(i, j - 1)) mass -= w[by_phi_[--j]];
      while (j < n && captures(i, j)) mass += w[by_phi_[j++]];
      if (mass > best + 1e-15) {
        best = mass;
        bi = i;
        bj = j - 1;
      }
      mass -= w[by_phi_[i]];
    }
    return centre(bi, bj);
  }

  std::vector<double> best_response(std::span<const double> pi) const {
    const std::size_t dsize = set_.alphabet_size();
    std::vector<double> out(dsize);
    std::vector<double> w(set_.size());
    for (std::size_t d = 0; d < dsize; ++d) {
      double total = 0.0;
      for (std::size_t k = 0; k < set_.size(); ++k) {
        w[k] = pi[k] * set_.likelihood(k, d);
        total += w[k];
      }
      if (!(total > 0.0)) std::copy(pi.begin(), pi.end(), w.begin());
      out[d] = best_decision(w);
    }
    return out;
  }

  std::vector<double> risks(const std::vector<double>& decisions) const {
    const LossFunction loss = LossFunction::threshold(gamma_);
    std::vector<double> r(set_.size(), 0.0);
    for (std::size_t k = 0; k < set_.size(); ++k) {
      for (std::uint32_t d : set_.support_order(k)) r[k] += set_.likelihood(k, d) * loss(decisions[d] - set_.phi(k));
    }
    return r;
  }

 private:
  double centre(std::size_t i, std::size_t j) const {
    return 0.5 * (set_.phi(by_phi_[i]) + set_.phi(by_phi_[j]));
  }
  bool captures(std::size_t i, std::size_t j) const {
    const double c = centre(i, j);
    return std::abs(c - set_.phi(by_phi_[i])) < gamma_ && std::abs(set_.phi(by_phi_[j]) - c) < gamma_;
  }

  const CandidateSet& set_;
  double gamma_;
  std::vector<std::size_t> by_phi_;
};

GameSolution double_oracle(const CandidateSet& set, const LossFunction& loss, const GameOptions& opts) {
  const ThresholdOracle oracle(set, loss.gamma);
  const std::size_t n = set.size();

  std::vector<std::vector<double>> pure;   // decision tables
  std::vector<std::vector<double>> risks;  // risk of each pure estimator at every candidate
  std::vector<std::size_t> cols;

  const auto add_pure = [&](std::vector<double> dec) {
    for (const auto& p : pure) {
      if (p == dec) return false;
    }
    risks.push_back(oracle.risks(dec));
    pure.push_back(std::move(dec));
    return true;
  };

  const Prior uniform = Prior::uniform(n);
  add_pure(oracle.best_response(uniform.weights));
  cols.push_back(static_cast<std::size_t>(
      std::max_element(risks[0].begin(), risks[0].end()) - risks[0].begin()));

  GameSolution sol;
  std::vector<double> x, prior(n, 0.0);
  double upper = 0.0, lower = 0.0;
  int round = 0;
  for (; round < opts.max_oracle_rounds; ++round) {
    std::vector<double> payoff(pure.size() * cols.size());
    for (std::size_t i = 0; i < pure.size(); ++i) {
      for (std::size_t c = 0; c < cols.size(); ++c) payoff[i * cols.size() + c] = risks[i][cols[c]];
    }
    const lp::GameSolution g = lp::solve_matrix_game(payoff, pure.size(), cols.size());
    sol.trajectory.push_back(g.value);
    x = g.row_strategy;
    std::fill(prior.begin(), prior.end(), 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c) prior[cols[c]] += g.column_strategy[c];

    std::vector<double> mixed(n, 0.0);
    for (std::size_t i = 0; i < pure.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) mixed[k] += x[i] * risks[i][k];
    }
    const std::size_t kstar =
        static_cast<std::size_t>(std::max_element(mixed.begin(), mixed.end()) - mixed.begin());
    upper = mixed[kstar];

    std::vector<double> br = oracle.best_response(prior);
    const std::vector<double> br_risk = oracle.risks(br);
    lower = 0.0;
    for (std::size_t k = 0; k < n; ++k) lower += prior[k] * br_risk[k];

    bool added = false;
    if (upper > g.value + opts.oracle_tol && std::find(cols.begin(), cols.end(), kstar) == cols.end()) {
      cols.push_back(kstar);
      added = true;
    }
    if (lower < g.value - opts.oracle_tol && add_pure(std::move(br))) added = true;
    if (!added) break;
  }

  // Randomized estimator over the shared decision grid plus the decisions used.
  std::vector<double> decisions;
  const double lo = set.phi_min(), hi = set.phi_max();
  const std::size_t grid = std::max<std::size_t>(opts.decision_grid, 1);
  for (std::size_t j = 0; j < grid; ++j) {
    decisions.push_back(grid == 1 ? 0.5 * (lo + hi)
                                  : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid - 1));
  }
  for (std::size_t i = 0; i < pure.size(); ++i) {
    if (x[i] > 0.0) decisions.insert(decisions.end(), pure[i].begin(), pure[i].end());
  }
  std::sort(decisions.begin(), decisions.end());
  decisions.erase(std::unique(decisions.begin(), decisions.end()), decisions.end());
  const std::size_t dsize = set.alphabet_size();
  std::vector<double> kernel(dsize * decisions.size(), 0.0);
  for (std::size_t i = 0; i < pure.size(); ++i) {
    if (!(x[i] > 0.0)) continue;
    sol.support_estimators.push_back(Estimator::deterministic(pure[i]));
    sol.support_weights.push_back(x[i]);
    for (std::size_t d = 0; d < dsize; ++d) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(decisions.begin(), decisions.end(), pure[i][d]) - decisions.begin());
      kernel[d * decisions.size() + j] += x[i];
    }
  }
  // Exact row normalization (LP output sums to one up to round-off).
  for (std::size_t d = 0; d < dsize; ++d) {
    double t = 0.0;
    for (std::size_t j = 0; j < decisions.size(); ++j) t += kernel[d * decisions.size() + j];
    for (std::size_t j = 0; j < decisions.size(); ++j) kernel[d * decisions.size() + j] /= t;
  }
  sol.estimator = Estimator::randomized(std::move(decisions), std::move(kernel), dsize);
  const double total = std::accumulate(prior.begin(), prior.end(), 0.0);
  for (double& p : prior) p /= total;
  sol.least_favorable_prior = Prior(prior);
  sol.minimax_value = worst_case_error(sol.estimator, set, loss).value;
  sol.maximin_value = lower;
  sol.duality_gap = sol.minimax_value - sol.maximin_value;
  sol.iterations = round + 1;
  sol.status = sol.duality_gap <= opts.certificate_tol ? GameStatus::Converged : GameStatus::NonConverged;
  return sol;
}

}  // namespace

// ---------------------------------------------------------------------------

Estimator bayes_estimator(const Prior& prior, const CandidateSet& set, const LossFunction& loss) {
  check_prior(prior, set);
  const std::vector<double> marginal = data_marginal(prior.weights, set);
  if (std::all_of(marginal.begin(), marginal.end(), [](double m) { return !(m > 0.0); })) {
    fail(ErrorKind::DegeneratePrior, "prior induces an all-zero data marginal");
  }
  if (loss.kind == LossFunction::Kind::Threshold) {
    return Estimator::deterministic(ThresholdOracle(set, loss.gamma).best_response(prior.weights));
  }
  const SquaredState st = evaluate_squared(set, prior.weights);
  std::vector<double> theta = st.theta;
  const double fill = prior_mean(prior.weights, set);
  for (std::size_t d = 0; d < theta.size(); ++d) {
    if (!(st.marginal[d] > 0.0)) theta[d] = fill;
  }
  return Estimator::deterministic(std::move(theta));
}

double bayes_risk(const Prior& prior, const CandidateSet& set, const LossFunction& loss) {
  check_prior(prior, set);
  if (loss.kind == LossFunction::Kind::Squared) return evaluate_squared(set, prior.weights).value;
  return averaged_risk(bayes_estimator(prior, set, loss), set, prior, loss);
}

LeastFavorable least_favorable_prior(const CandidateSet& set, const LossFunction& loss,
                                     const GameOptions& opts) {
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");
  if (loss.kind == LossFunction::Kind::Squared) return ascend_squared(set, opts);
  const GameSolution g = double_oracle(set, loss, opts);
  LeastFavorable out;
  out.prior = g.least_favorable_prior;
  out.bayes_risk = g.maximin_value;
  out.iterations = g.iterations;
  out.converged = g.status == GameStatus::Converged;
  out.trajectory = g.trajectory;
  return out;
}

GameSolution minimax_estimator(const CandidateSet& set, const LossFunction& loss, const GameOptions& opts) {
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");
  if (loss.kind == LossFunction::Kind::Threshold) return double_oracle(set, loss, opts);

  LeastFavorable lf = ascend_squared(set, opts);
  GameSolution sol;
  sol.estimator = minimax_version(set, lf.prior);
  sol.least_favorable_prior = lf.prior;
  sol.maximin_value = lf.bayes_risk;
  sol.minimax_value = worst_case_error(sol.estimator, set, loss).value;
  sol.duality_gap = sol.minimax_value - sol.maximin_value;
  sol.iterations = lf.iterations;
  sol.trajectory = std::move(lf.trajectory);
  sol.status = sol.duality_gap <= opts.certificate_tol ? GameStatus::Converged : GameStatus::NonConverged;
  return sol;
}

ExperimentComparison compare_experiments(const DataMap& first, const DataMap& second,
                                         std::span<const Candidate> candidates,
                                         const LossFunction& loss, const GameOptions& opts) {
  if (candidates.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");
  const auto family = [&](const DataMap& map) {
    std::vector<Candidate> cs;
    cs.reserve(candidates.size());
    for (const auto& c : candidates) {
      Candidate copy = c;
      copy.data = map.apply(c.measure);
      cs.push_back(std::move(copy));
    }
    return CandidateSet(std::move(cs));
  };
  ExperimentComparison cmp;
  cmp.first = minimax_estimator(family(first), loss, opts);
  cmp.second = minimax_estimator(family(second), loss, opts);
  const double v1 = cmp.first.minimax_value, v2 = cmp.second.minimax_value;
  if (std::abs(v1 - v2) <= 1e-9) cmp.preference = ExperimentPreference::Equivalent;
  else cmp.preference = v1 < v2 ? ExperimentPreference::FirstPreferable : ExperimentPreference::SecondPreferable;
  return cmp;
}

MixResult mix_estimators(std::span<const Estimator> thetas, const CandidateSet& set,
                         const LossFunction& loss, int iterations) {
  if (!loss.convex()) fail(ErrorKind::NonConvexLoss, "estimator mixing requires a convex loss");
  if (thetas.empty()) fail(ErrorKind::LengthMismatch, "at least one estimator required");
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "empty candidate list");
  const std::size_t m = thetas.size(), n = set.size();
  for (const auto& t : thetas) {
    if (t.alphabet_size() != set.alphabet_size()) fail(ErrorKind::AlphabetMismatch, "estimator alphabet mismatch");
  }

  // On the simplex the risk at candidate k is the quadratic form αᵀ Q_k α
  // with Q_k[i][j] = Σ_d L_k(d) (θ_i(d) - Φ_k)(θ_j(d) - Φ_k).
  std::vector<double> q(n * m * m, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::uint32_t d : set.support_order(k)) {
      const double l = set.likelihood(k, d);
      for (std::size_t i = 0; i < m; ++i) {
        const double ei = thetas[i].mean(d) - set.phi(k);
        for (std::size_t j = 0; j < m; ++j) q[(k * m + i) * m + j] += l * ei * (thetas[j].mean(d) - set.phi(k));
      }
    }
  }
  const auto objective = [&](const std::vector<double>& a, std::size_t* arg) {
    double best = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) v += a[i] * q[(k * m + i) * m + j] * a[j];
      }
      if (v > best) {
        best = v;
        if (arg) *arg = k;
      }
    }
    return best;
  };

  MixResult res;
  std::vector<double> alpha(m, 0.0);
  std::size_t best_vertex = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> e(m, 0.0);
    e[i] = 1.0;
    res.vertex_values.push_back(worst_case_error(thetas[i], set, loss).value);
    if (res.vertex_values[i] < res.vertex_values[best_vertex]) best_vertex = i;
  }
  alpha[best_vertex] = 1.0;
  std::vector<double> best_alpha = alpha;
  double best_value = objective(alpha, nullptr);

  // Projected subgradient with diminishing steps.
  const double scale = std::max(best_value, 1e-300);
  for (int t = 1; t <= iterations; ++t) {
    std::size_t k = 0;
    const double v = objective(alpha, &k);
    if (v < best_value) {
      best_value = v;
      best_alpha = alpha;
    }
    std::vector<double> g(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) g[i] += 2.0 * q[(k * m + i) * m + j] * alpha[j];
    }
    double gn = 0.0;
    for (double gi : g) gn += gi * gi;
    gn = std::sqrt(gn);
    if (gn == 0.0) break;
    const double step = 0.5 * scale / (gn * std::sqrt(static_cast<double>(t)));
    for (std::size_t i = 0; i < m; ++i) alpha[i] -= step * g[i];
    alpha = project_to_simplex(alpha);
  }
  // Pattern refinement along pairwise mass transfers.
  alpha = best_alpha;
  for (double step = 0.25; step > 1e-13; ) {
    bool improved = false;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j || alpha[j] <= 0.0) continue;
        std::vector<double> trial = alpha;
        const double moved = std::min(step, trial[j]);
        trial[i] += moved;
        trial[j] -= moved;
        const double v = objective(trial, nullptr);
        if (v < best_value - 1e-16) {
          best_value = v;
          alpha = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step /= 2.0;
  }
  res.alpha = alpha;
  res.value = worst_case_error(Estimator::combine(thetas, alpha), set, loss).value;
  return res;
}

const char* to_string(ExperimentPreference p) noexcept {
  switch (p) {
    case ExperimentPreference::FirstPreferable: return "FirstPreferable";
    case ExperimentPreference::SecondPreferable: return "SecondPreferable";
    case ExperimentPreference::Equivalent: return "Equivalent";
  }
  return "Equivalent";
}

}  // namespace ouq
