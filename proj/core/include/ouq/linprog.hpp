#pragma once

// Dense two-phase simplex for the small linear programs that appear in the
// library: weight optimization at fixed atom positions, feasibility probes
// and mixed-strategy matrix games.

#include <cstddef>
#include <utility>
#include <vector>

namespace ouq::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

/// maximize objective·x subject to rows[i]·x (relation) rhs[i], x >= 0.
struct Problem {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;

  void add_row(std::vector<double> coefficients, Relation rel, double bound) {
    rows.push_back(std::move(coefficients));
    relations.push_back(rel);
    rhs.push_back(bound);
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  /// Phase-one residual (sum of artificial variables) when infeasible.
  double infeasibility = 0.0;
  std::vector<double> x;
  /// Shadow price of each constraint row (sign convention: d value / d rhs).
  std::vector<double> duals;
};

/// Bland's rule throughout, so results are deterministic and cycling-free.
Solution maximize(const Problem& problem);

/// Zero-sum game where the row player minimizes x^T A y and the column player
/// maximizes it.
struct GameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> column_strategy;
};

/// `payoff` is row-major with `rows` rows.
GameSolution solve_matrix_game(const std::vector<double>& payoff, std::size_t rows,
                               std::size_t cols);

}  // namespace ouq::lp
