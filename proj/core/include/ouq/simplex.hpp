#pragma once

#include <span>
#include <vector>

namespace ouq {

/// Euclidean projection onto the probability simplex (sort-based, O(n log n)).
std::vector<double> project_to_simplex(std::span<const double> v);

/// Nonnegative and summing to one within `tol`.
bool on_simplex(std::span<const double> w, double tol = 1e-12) noexcept;

/// Sum in descending order of magnitude; the summation order the risk module
/// uses for reproducible totals.
double ordered_sum(std::vector<double> terms);

}  // namespace ouq
