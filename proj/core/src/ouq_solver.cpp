#include "ouq/ouq_solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "ouq/error.hpp"
#include "ouq/linprog.hpp"

namespace ouq {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "ouq_solver", what);
}

lp::Relation to_lp(ConstraintRelation r) {
  switch (r) {
    case ConstraintRelation::LessEqual: return lp::Relation::LessEqual;
    case ConstraintRelation::GreaterEqual: return lp::Relation::GreaterEqual;
    case ConstraintRelation::Equal: return lp::Relation::Equal;
  }
  return lp::Relation::Equal;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// Feasible points always beat infeasible ones; infeasible points are ranked
// by their phase-one residual so the search can walk into the feasible set.
struct Score {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();

  bool better_than(const Score& o, double margin = 1e-15) const {
    if (feasible != o.feasible) return feasible;
    return value > o.value + margin;
  }
};

struct Point {
  std::vector<double> x;  // positions
  std::vector<double> t;  // band offsets (empty without a band)
};

struct Evaluation {
  Score score;
  std::vector<double> weights;
};

// The reduced problem for one optimization sense (+1 sup, -1 inf).
class ReducedProblem {
 public:
  ReducedProblem(const AdmissibleSet& set, const QuantityOfInterest& phi, double sense,
                 std::size_t atoms)
      : set_(set), phi_(phi), sense_(sense), atoms_(atoms) {
    const Interval d = set.domain();
    seeds_ = set.grid();
    seeds_.push_back(d.lo);
    seeds_.push_back(d.hi);
    if (phi.kind() == QuantityOfInterest::Kind::TailProbability) {
      const auto add = [&](const TabulatedFunction& f, double level) {
        for (double x : f.level_crossings(level)) {
          if (d.contains(x)) seeds_.push_back(x);
        }
      };
      if (set.band()) {
        add(set.band()->center, phi.threshold() - set.band()->half_width);
        add(set.band()->center, phi.threshold() + set.band()->half_width);
      } else {
        add(phi.function(), phi.threshold());
      }
    }
    std::sort(seeds_.begin(), seeds_.end());
    seeds_.erase(std::unique(seeds_.begin(), seeds_.end()), seeds_.end());
  }

  std::size_t atoms() const { return atoms_; }
  bool banded() const { return set_.band().has_value(); }
  double half_width() const { return banded() ? set_.band()->half_width : 0.0; }
  const std::vector<double>& seeds() const { return seeds_; }
  const Interval& domain() const { return set_.domain(); }

  double f_value(double x, double t) const {
    return banded() ? set_.band()->center(x) + t : phi_.function()(x);
  }

  // Band offsets worth trying at a point: both band edges, the nominal value
  // and the offset that lands exactly on the tail threshold.
  std::vector<double> offset_candidates(double x) const {
    if (!banded()) return {0.0};
    const double w = half_width();
    std::vector<double> out{-w, 0.0, w};
    if (phi_.kind() == QuantityOfInterest::Kind::TailProbability) {
      const double t = phi_.threshold() - set_.band()->center(x);
      if (t >= -w && t <= w) out.push_back(t);
    }
    return out;
  }

  Evaluation evaluate(const Point& p) const {
    const std::size_t k = p.x.size();
    if (banded()) {
      // f is single-valued: coinciding atoms must carry the same offset.
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          if (canonical_key(p.x[i]) == canonical_key(p.x[j]) && p.t[i] != p.t[j]) return {};
        }
      }
    }
    lp::Problem prob;
    prob.objective.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      prob.objective[i] = sense_ * phi_.atom_value(f_value(p.x[i], banded() ? p.t[i] : 0.0));
    }
    prob.add_row(std::vector<double>(k, 1.0), lp::Relation::Equal, 1.0);
    for (const auto& c : set_.constraints()) {
      std::vector<double> row(k);
      for (std::size_t i = 0; i < k; ++i) row[i] = c.g(p.x[i]);
      prob.add_row(std::move(row), to_lp(c.relation), c.bound);
    }
    const lp::Solution sol = lp::maximize(prob);
    Evaluation e;
    if (sol.status == lp::Status::Optimal) {
      e.score = {true, sol.value};
      e.weights = sol.x;
    } else {
      e.score = {false, -sol.infeasibility};
    }
    return e;
  }

  // Global optimum over measures supported on the seed set; its support
  // (at most #constraints + 1 atoms for a basic solution) seeds restart 0.
  Point grid_seed() const {
    const auto& pts = seeds_;
    std::vector<double> best_t(pts.size(), 0.0);
    lp::Problem prob;
    prob.objective.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (double t : offset_candidates(pts[i])) {
        const double v = sense_ * phi_.atom_value(f_value(pts[i], t));
        if (v > best) {
          best = v;
          best_t[i] = t;
        }
      }
      prob.objective[i] = best;
    }
    prob.add_row(std::vector<double>(pts.size(), 1.0), lp::Relation::Equal, 1.0);
    for (const auto& c : set_.constraints()) {
      std::vector<double> row(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) row[i] = c.g(pts[i]);
      prob.add_row(std::move(row), to_lp(c.relation), c.bound);
    }
    const lp::Solution sol = lp::maximize(prob);

    std::vector<std::size_t> order;
    if (sol.status == lp::Status::Optimal) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (sol.x[i] > 0.0) order.push_back(i);
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return sol.x[a] > sol.x[b]; });
    }
    // Pad with the domain ends and the remaining seeds.
    std::vector<std::size_t> pad;
    pad.push_back(0);
    pad.push_back(pts.size() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) pad.push_back(i);
    for (std::size_t i : pad) {
      if (order.size() >= atoms_) break;
      if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
    }
    order.resize(std::min(order.size(), atoms_));
    Point p;
    for (std::size_t i : order) {
      p.x.push_back(pts[i]);
      if (banded()) p.t.push_back(best_t[i]);
    }
    while (p.x.size() < atoms_) {
      p.x.push_back(pts.front());
      if (banded()) p.t.push_back(p.t.empty() ? 0.0 : p.t.front());
    }
    return p;
  }

 private:
  const AdmissibleSet& set_;
  const QuantityOfInterest& phi_;
  double sense_;
  std::size_t atoms_;
  std::vector<double> seeds_;
};

struct RestartOutcome {
  Point point;
  Evaluation eval;
  int iterations = 0;
  bool converged = false;
};

RestartOutcome run_restart(const ReducedProblem& prob, Point p, const SolverOptions& opts) {
  const Interval d = prob.domain();
  const double width = std::max(d.width(), 0.0);
  const double w = prob.half_width();
  const std::size_t k = prob.atoms();
  const std::size_t ncoords = k + (prob.banded() ? k : 0);

  Evaluation cur = prob.evaluate(p);
  double step_x = width / 4.0;
  double step_t = w / 2.0;
  const double min_step_x = 1e-14 * std::max(1.0, width);
  const double min_step_t = 1e-14 * std::max(1.0, w);

  std::vector<double> history;
  RestartOutcome out;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    bool improved = false;
    for (std::size_t c = 0; c < ncoords; ++c) {
      const bool is_pos = c < k;
      const std::size_t i = is_pos ? c : c - k;
      double& coord = is_pos ? p.x[i] : p.t[i];
      const double lo = is_pos ? d.lo : -w;
      const double hi = is_pos ? d.hi : w;
      const double step = is_pos ? step_x : step_t;

      std::vector<double> trials{std::clamp(coord + step, lo, hi), std::clamp(coord - step, lo, hi)};
      if (iter == 0) {
        if (is_pos) {
          trials.insert(trials.end(), prob.seeds().begin(), prob.seeds().end());
        } else {
          const auto offs = prob.offset_candidates(p.x[i]);
          trials.insert(trials.end(), offs.begin(), offs.end());
        }
      }
      const double original = coord;
      double best_v = original;
      Evaluation best_e = cur;
      for (double v : trials) {
        if (v == original) continue;
        coord = v;
        Evaluation e = prob.evaluate(p);
        if (e.score.better_than(best_e.score)) {
          best_e = std::move(e);
          best_v = v;
        }
      }
      coord = best_v;
      if (best_v != original) {
        cur = std::move(best_e);
        improved = true;
      }
    }
    if (!improved) {
      step_x /= 2.0;
      step_t /= 2.0;
    }
    history.push_back(cur.score.feasible ? cur.score.value : -std::numeric_limits<double>::infinity());
    const auto n = static_cast<int>(history.size());
    if (cur.score.feasible && n > opts.stall_window &&
        history[n - 1] - history[n - 1 - opts.stall_window] < opts.tol) {
      out.converged = true;
      break;
    }
    if (step_x < min_step_x && (!prob.banded() || step_t < min_step_t)) {
      out.converged = cur.score.feasible;
      break;
    }
  }
  out.point = std::move(p);
  out.eval = std::move(cur);
  out.iterations = std::min(iter + 1, opts.max_iters);
  return out;
}

Point random_point(const ReducedProblem& prob, std::uint64_t seed, int restart) {
  std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart) + 1)));
  const Interval d = prob.domain();
  Point p;
  for (std::size_t i = 0; i < prob.atoms(); ++i) p.x.push_back(d.lo + d.width() * uniform01(gen));
  if (prob.banded()) {
    const double w = prob.half_width();
    for (std::size_t i = 0; i < prob.atoms(); ++i) p.t.push_back(-w + 2.0 * w * uniform01(gen));
  }
  return p;
}

BoundResult solve(const AdmissibleSet& a_set, const QuantityOfInterest& phi,
                  const SolverOptions& opts, double sense) {
  if (!phi.is_linear()) fail(ErrorKind::DomainError, "custom quantities of interest cannot be optimized");
  if (opts.restarts < 1) fail(ErrorKind::DomainError, "at least one restart required");
  const std::size_t atoms = opts.atoms.value_or(reduced_parametrization(a_set).atoms);
  if (atoms < 1) fail(ErrorKind::DomainError, "at least one atom required");
  if (!a_set.probe_feasible()) fail(ErrorKind::InfeasibleSet, "admissible set is empty on its grid");

  const ReducedProblem prob(a_set, phi, sense, atoms);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  const auto task = [&](int r) {
    Point start = r == 0 ? prob.grid_seed() : random_point(prob, opts.seed, r);
    return run_restart(prob, std::move(start), opts);
  };
  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (int r = 0; r < opts.restarts; ++r) outcomes[static_cast<std::size_t>(r)] = task(r);
  } else {
    for (int base = 0; base < opts.restarts; base += threads) {
      std::vector<std::future<RestartOutcome>> batch;
      for (int r = base; r < std::min(opts.restarts, base + threads); ++r) {
        batch.push_back(std::async(std::launch::async, task, r));
      }
      for (std::size_t j = 0; j < batch.size(); ++j) {
        outcomes[static_cast<std::size_t>(base) + j] = batch[j].get();
      }
    }
  }

  BoundResult result;
  result.trace.restarts = opts.restarts;
  std::size_t best = outcomes.size();
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& o = outcomes[r];
    result.trace.iterations += o.iterations;
    result.trace.per_restart.push_back(
        {static_cast<int>(r), o.iterations, o.eval.score.feasible ? sense * o.eval.score.value : std::nan(""),
         o.converged});
    if (!o.eval.score.feasible) continue;
    if (best == outcomes.size() || o.eval.score.better_than(outcomes[best].eval.score, 0.0)) best = r;
  }
  if (best == outcomes.size()) fail(ErrorKind::InfeasibleSet, "no restart reached a feasible point");

  // Assemble the extremizer: drop zero-weight atoms, merge coincident ones.
  const auto& o = outcomes[best];
  std::map<long long, std::tuple<double, double, double>> atoms_by_key;  // x, w, f
  for (std::size_t i = 0; i < o.point.x.size(); ++i) {
    const double w = o.eval.weights[i];
    if (!(w > 0.0)) continue;
    const double f = prob.banded() ? prob.f_value(o.point.x[i], o.point.t[i]) : 0.0;
    auto [it, inserted] = atoms_by_key.try_emplace(canonical_key(o.point.x[i]), o.point.x[i], 0.0, f);
    std::get<1>(it->second) += w;
  }
  if (atoms_by_key.empty()) fail(ErrorKind::NumericalFailure, "optimal weights vanished");
  std::vector<double> xs, ws, fs;
  for (const auto& [key, xwf] : atoms_by_key) {
    xs.push_back(std::get<0>(xwf));
    ws.push_back(std::get<1>(xwf));
    fs.push_back(std::get<2>(xwf));
  }
  result.extremizer = make_measure(xs, ws, a_set.domain());
  if (prob.banded()) result.function_values = fs;
  result.value = result.function_values
                     ? evaluate_qoi(phi, result.extremizer, std::span<const double>(*result.function_values))
                     : evaluate_qoi(phi, result.extremizer);
  result.status = o.converged ? SolveStatus::Converged : SolveStatus::MaxIter;
  return result;
}

}  // namespace

BoundResult upper_bound(const AdmissibleSet& a_set, const QuantityOfInterest& phi,
                        const SolverOptions& opts) {
  return solve(a_set, phi, opts, 1.0);
}

BoundResult lower_bound(const AdmissibleSet& a_set, const QuantityOfInterest& phi,
                        const SolverOptions& opts) {
  return solve(a_set, phi, opts, -1.0);
}

Certification classify(double lower, double upper, double epsilon) {
  if (upper <= epsilon) return Certification::Safe;
  if (lower > epsilon) return Certification::Unsafe;
  return Certification::Undecided;
}

CertifyResult certify(const AdmissibleSet& a_set, const QuantityOfInterest& phi, double epsilon,
                      const SolverOptions& opts) {
  if (phi.kind() != QuantityOfInterest::Kind::TailProbability) {
    fail(ErrorKind::DomainError, "certification requires a tail probability");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail(ErrorKind::DomainError, "epsilon must lie in [0, 1]");
  CertifyResult r;
  r.lower = lower_bound(a_set, phi, opts);
  r.upper = upper_bound(a_set, phi, opts);
  r.verdict = classify(r.lower.value, r.upper.value, epsilon);
  return r;
}

double markov_oracle(double m, double a) {
  if (!(m > 0.0 && m < a && a <= 1.0)) fail(ErrorKind::DomainError, "requires 0 < m < a <= 1");
  return std::min(1.0, m / a);
}

const char* to_string(Certification c) noexcept {
  switch (c) {
    case Certification::Safe: return "Safe";
    case Certification::Unsafe: return "Unsafe";
    case Certification::Undecided: return "Undecided";
  }
  return "Undecided";
}

}  // namespace ouq
