#include "ouq/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ouq/error.hpp"

namespace ouq::lp {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-11;
constexpr double kFeasEps = 1e-9;

// Tableau with one identity column per row (slack or artificial) so that the
// basis inverse, and hence the duals, can be read off at the end.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_((m + 1) * (n + 1), 0.0), basis_(m) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }
  double objective() const { return -at(m_, n_); }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Load costs (maximize) and express them in reduced form for the current basis.
  void set_costs(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= n_; ++j) at(m_, j) = j < n_ ? c[j] : 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = at(m_, basis_[r]);
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(m_, j) -= cb * at(r, j);
    }
  }

  // Returns false if unbounded.
  bool run(const std::vector<char>& allowed) {
    for (std::size_t iter = 0; iter < 50'000; ++iter) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (allowed[j] && at(m_, j) > kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter == n_) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a > kPivotEps) {
          const double ratio = at(r, n_) / a;
          if (ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 && leave < m_ && basis_[r] < basis_[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorKind::NumericalFailure, "linprog", "simplex iteration limit reached");
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution maximize(const Problem& problem) {
  const std::size_t m = problem.rows.size();
  const std::size_t nx = problem.objective.size();
  if (problem.relations.size() != m || problem.rhs.size() != m) {
    throw Error(ErrorKind::LengthMismatch, "linprog", "row metadata size mismatch");
  }

  // Column layout: [x | surplus (one per >= row) | identity (one per row)].
  std::vector<double> sign(m, 1.0);
  std::vector<Relation> rel(problem.relations);
  for (std::size_t i = 0; i < m; ++i) {
    if (problem.rows[i].size() != nx) {
      throw Error(ErrorKind::LengthMismatch, "linprog", "row length mismatch");
    }
    if (problem.rhs[i] < 0.0) {
      sign[i] = -1.0;
      if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
      else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
    }
  }
  std::vector<std::size_t> surplus_col(m, 0);
  std::size_t n = nx;
  for (std::size_t i = 0; i < m; ++i) {
    if (rel[i] == Relation::GreaterEqual) surplus_col[i] = n++;
  }
  const std::size_t id0 = n;
  n += m;

  Tableau tab(m, n);
  std::vector<char> artificial(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nx; ++j) tab.at(i, j) = sign[i] * problem.rows[i][j];
    if (rel[i] == Relation::GreaterEqual) tab.at(i, surplus_col[i]) = -1.0;
    tab.at(i, id0 + i) = 1.0;
    if (rel[i] != Relation::LessEqual) artificial[id0 + i] = 1;
    tab.rhs(i) = sign[i] * problem.rhs[i];
    tab.basis()[i] = id0 + i;
  }

  std::vector<char> allowed(n, 1);
  const bool need_phase1 = std::any_of(artificial.begin(), artificial.end(), [](char a) { return a; });
  if (need_phase1) {
    std::vector<double> c1(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) c1[j] = artificial[j] ? -1.0 : 0.0;
    tab.set_costs(c1);
    tab.run(allowed);
    if (tab.objective() < -kFeasEps) {
      Solution infeasible;
      infeasible.infeasibility = -tab.objective();
      return infeasible;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (!artificial[tab.basis()[r]]) continue;
      for (std::size_t j = 0; j < id0; ++j) {
        if (std::abs(tab.at(r, j)) > 1e-9) {
          tab.pivot(r, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (artificial[j]) allowed[j] = 0;
    }
  }

  std::vector<double> c2(n, 0.0);
  std::copy(problem.objective.begin(), problem.objective.end(), c2.begin());
  tab.set_costs(c2);
  if (!tab.run(allowed)) {
    Solution unbounded;
    unbounded.status = Status::Unbounded;
    return unbounded;
  }

  Solution sol;
  sol.status = Status::Optimal;
  sol.x.assign(nx, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < nx) sol.x[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
  }
  sol.value = std::inner_product(problem.objective.begin(), problem.objective.end(), sol.x.begin(), 0.0);
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = -tab.cost(id0 + i) * sign[i];
  return sol;
}

GameSolution solve_matrix_game(const std::vector<double>& payoff, std::size_t rows,
                               std::size_t cols) {
  if (payoff.size() != rows * cols || rows == 0 || cols == 0) {
    throw Error(ErrorKind::LengthMismatch, "linprog", "payoff matrix shape mismatch");
  }
  const double lowest = *std::min_element(payoff.begin(), payoff.end());
  const double shift = 1.0 - lowest;

  // Row player: maximize Σz subject to Σ_i (A_ik + shift) z_i <= 1 for every column k.
  Problem lp;
  lp.objective.assign(rows, 1.0);
  for (std::size_t k = 0; k < cols; ++k) {
    std::vector<double> row(rows);
    for (std::size_t i = 0; i < rows; ++i) row[i] = payoff[i * cols + k] + shift;
    lp.add_row(std::move(row), Relation::LessEqual, 1.0);
  }
  const Solution sol = maximize(lp);
  if (sol.status != Status::Optimal || !(sol.value > 0.0)) {
    throw Error(ErrorKind::NumericalFailure, "linprog", "matrix game LP failed");
  }
  GameSolution g;
  const double vb = 1.0 / sol.value;
  g.value = vb - shift;
  g.row_strategy.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) g.row_strategy[i] = sol.x[i] * vb;
  g.column_strategy.resize(cols);
  double ysum = 0.0;
  for (std::size_t k = 0; k < cols; ++k) {
    g.column_strategy[k] = std::max(0.0, sol.duals[k]);
    ysum += g.column_strategy[k];
  }
  for (double& y : g.column_strategy) y /= ysum;
  const double xsum = std::accumulate(g.row_strategy.begin(), g.row_strategy.end(), 0.0);
  for (double& x : g.row_strategy) x /= xsum;
  return g;
}

}  // namespace ouq::lp
