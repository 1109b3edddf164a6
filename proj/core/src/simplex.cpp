#include "ouq/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ouq {

std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(0.0, v[i] - tau);
    total += out[i];
  }
  if (total > 0.0) {
    for (double& x : out) x /= total;
  }
  return out;
}

bool on_simplex(std::span<const double> w, double tol) noexcept {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) return false;
    total += x;
  }
  return std::abs(total - 1.0) <= tol;
}

double ordered_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace ouq
