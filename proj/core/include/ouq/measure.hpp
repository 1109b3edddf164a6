#pragma once

// Finite discrete measures, tabulated functions, quantities of interest and
// the data distributions induced by sampling from a measure.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ouq {

/// Weight-sum tolerance shared by every simplex-valued object in the library.
inline constexpr double kMassTolerance = 1e-12;

/// Default cap on the number of multiset data symbols.
inline constexpr std::size_t kDefaultAlphabetCap = 200'000;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x, double slack = 0.0) const noexcept {
    return x >= lo - slack && x <= hi + slack;
  }
  double width() const noexcept { return hi - lo; }
};

/// A real function known through (x, value) knots and evaluated by linear
/// interpolation between them. Evaluation outside the knot range throws
/// UndefinedAtSupport.
class TabulatedFunction {
 public:
  TabulatedFunction() = default;
  TabulatedFunction(std::vector<double> xs, std::vector<double> ys);

  static TabulatedFunction from_pairs(std::vector<std::pair<double, double>> pairs);
  static TabulatedFunction identity(Interval domain);
  static TabulatedFunction constant(Interval domain, double value);
  template <class Fn>
  static TabulatedFunction sample(std::span<const double> grid, Fn&& fn) {
    std::vector<double> ys;
    ys.reserve(grid.size());
    for (double x : grid) ys.push_back(fn(x));
    return TabulatedFunction({grid.begin(), grid.end()}, std::move(ys));
  }

  double operator()(double x) const;
  bool defined_at(double x) const noexcept;

  const std::vector<double>& xs() const noexcept { return xs_; }
  const std::vector<double>& ys() const noexcept { return ys_; }
  double min_value() const;
  double max_value() const;
  bool empty() const noexcept { return xs_.empty(); }

  /// Points where the interpolant crosses `level` (first point with f >= level
  /// on each upward crossing, and knots lying exactly on the level).
  std::vector<double> level_crossings(double level) const;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Finite convex combination of Dirac masses on an interval domain.
/// Support is sorted ascending, distinct after rounding to 12 decimals,
/// weights are nonnegative and sum to one.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return support_.size(); }
  const Interval& domain() const noexcept { return domain_; }

  double mean() const;
  bool approx_equal(const DiscreteMeasure& other, double tol = 1e-12) const;

 private:
  friend DiscreteMeasure make_measure(std::span<const double>, std::span<const double>,
                                      Interval);
  std::vector<double> support_;
  std::vector<double> weights_;
  Interval domain_;
};

/// Normalizes, sorts and merges duplicate points (by canonical rounding).
/// Throws NegativeWeight, PointOutsideDomain, ZeroTotalMass, LengthMismatch.
DiscreteMeasure make_measure(std::span<const double> points, std::span<const double> weights,
                             Interval domain);
DiscreteMeasure dirac(double point, Interval domain);

/// Canonical key used for point deduplication (12 decimal digits).
long long canonical_key(double x) noexcept;

/// Σ weights·g(points).
double moment(const DiscreteMeasure& mu, const TabulatedFunction& g);

class QuantityOfInterest {
 public:
  enum class Kind { TailProbability, Expectation, Custom };

  static QuantityOfInterest tail_probability(TabulatedFunction f, double threshold);
  static QuantityOfInterest expectation(TabulatedFunction f);
  /// Lookup table measure -> value; evaluation of an unlisted measure throws.
  static QuantityOfInterest custom(std::vector<std::pair<DiscreteMeasure, double>> table);

  Kind kind() const noexcept { return kind_; }
  const TabulatedFunction& function() const noexcept { return f_; }
  double threshold() const noexcept { return threshold_; }
  double lower_range() const noexcept { return lower_; }
  double upper_range() const noexcept { return upper_; }

  /// True when the value is Σ weight·atom_value(f(point)).
  bool is_linear() const noexcept { return kind_ != Kind::Custom; }
  double atom_value(double f_value) const noexcept;

 private:
  Kind kind_ = Kind::Expectation;
  TabulatedFunction f_;
  double threshold_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::vector<std::pair<DiscreteMeasure, double>> table_;

 public:
  /// Custom kind only; throws UndefinedAtSupport for unlisted measures.
  double table_value(const DiscreteMeasure& mu) const;
};

/// Φ(μ). When `f_values` is given it overrides the QoI function on the support
/// (one value per atom), which is how banded functions are evaluated.
double evaluate_qoi(const QuantityOfInterest& phi, const DiscreteMeasure& mu,
                    std::optional<std::span<const double>> f_values = std::nullopt);

/// A data symbol is a sorted multiset of observed values (sample values or
/// coarse-observation labels).
using DataSymbol = std::vector<double>;

struct DataDistribution {
  std::vector<DataSymbol> alphabet;   // lexicographically sorted, distinct
  std::vector<double> probabilities;  // same length, sums to 1

  std::size_t size() const noexcept { return alphabet.size(); }
  /// Probability of `symbol`, 0 if absent.
  double probability_of(const DataSymbol& symbol) const;
};

/// Law of the sorted sample of n i.i.d. draws from mu. Throws AlphabetTooLarge
/// when the number of multisets exceeds `cap`.
DataDistribution iid_data(const DiscreteMeasure& mu, int n,
                          std::size_t cap = kDefaultAlphabetCap);

/// Number of size-n multisets over `atoms` distinct values (as a double, so
/// that overflow is harmless for cap checks).
double multiset_count(std::size_t atoms, int n) noexcept;

}  // namespace ouq
