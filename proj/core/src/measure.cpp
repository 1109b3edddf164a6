#include "ouq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "ouq/error.hpp"

namespace ouq {
namespace {

constexpr double kKnotSlack = 1e-12;

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "measure_core", what);
}

}  // namespace

// ---------------------------------------------------------------------------
// TabulatedFunction

TabulatedFunction::TabulatedFunction(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size()) fail(ErrorKind::LengthMismatch, "knot and value counts differ");
  if (xs_.empty()) fail(ErrorKind::LengthMismatch, "tabulated function needs at least one knot");
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) fail(ErrorKind::DomainError, "knots must be strictly increasing");
  }
  for (double y : ys_) {
    if (!std::isfinite(y)) fail(ErrorKind::DomainError, "tabulated values must be finite");
  }
}

TabulatedFunction TabulatedFunction::from_pairs(std::vector<std::pair<double, double>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<double> xs, ys;
  xs.reserve(pairs.size());
  ys.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return TabulatedFunction(std::move(xs), std::move(ys));
}

TabulatedFunction TabulatedFunction::identity(Interval domain) {
  if (domain.hi == domain.lo) return TabulatedFunction({domain.lo}, {domain.lo});
  return TabulatedFunction({domain.lo, domain.hi}, {domain.lo, domain.hi});
}

TabulatedFunction TabulatedFunction::constant(Interval domain, double value) {
  if (domain.hi == domain.lo) return TabulatedFunction({domain.lo}, {value});
  return TabulatedFunction({domain.lo, domain.hi}, {value, value});
}

bool TabulatedFunction::defined_at(double x) const noexcept {
  return !xs_.empty() && x >= xs_.front() - kKnotSlack && x <= xs_.back() + kKnotSlack;
}

double TabulatedFunction::operator()(double x) const {
  if (!defined_at(x)) {
    fail(ErrorKind::UndefinedAtSupport, "function undefined at x = " + std::to_string(x));
  }
  if (xs_.size() == 1 || x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  const std::size_t i = j - 1;
  if (x == xs_[i]) return ys_[i];
  const double t = (x - xs_[i]) / (xs_[j] - xs_[i]);
  return ys_[i] + t * (ys_[j] - ys_[i]);
}

double TabulatedFunction::min_value() const { return *std::min_element(ys_.begin(), ys_.end()); }
double TabulatedFunction::max_value() const { return *std::max_element(ys_.begin(), ys_.end()); }

std::vector<double> TabulatedFunction::level_crossings(double level) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (ys_[i] == level) out.push_back(xs_[i]);
    if (i + 1 < xs_.size()) {
      const double a = ys_[i], b = ys_[i + 1];
      if ((a < level && b > level) || (a > level && b < level)) {
        double x = xs_[i] + (level - a) / (b - a) * (xs_[i + 1] - xs_[i]);
        // Nudge onto the closed side {f >= level} so the crossing point counts.
        for (int k = 0; k < 64 && (*this)(x) < level; ++k) {
          x = (b > a) ? std::nextafter(x, xs_[i + 1]) : std::nextafter(x, xs_[i]);
        }
        out.push_back(x);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

long long canonical_key(double x) noexcept { return std::llround(x * 1e12); }

DiscreteMeasure make_measure(std::span<const double> points, std::span<const double> weights,
                             Interval domain) {
  if (points.size() != weights.size()) fail(ErrorKind::LengthMismatch, "points/weights length mismatch");
  if (!(domain.hi >= domain.lo)) fail(ErrorKind::DomainError, "empty domain");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      fail(ErrorKind::NegativeWeight, "weight " + std::to_string(i) + " is negative");
    }
    if (!std::isfinite(points[i]) || !domain.contains(points[i])) {
      fail(ErrorKind::PointOutsideDomain,
           "point " + std::to_string(points[i]) + " outside domain");
    }
    total += weights[i];
  }
  if (!(total > 0.0)) fail(ErrorKind::ZeroTotalMass, "total mass is zero");

  // key -> (first point seen, accumulated weight)
  std::map<long long, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [it, inserted] = merged.try_emplace(canonical_key(points[i]), points[i], 0.0);
    it->second.second += weights[i];
  }
  DiscreteMeasure mu;
  mu.domain_ = domain;
  mu.support_.reserve(merged.size());
  mu.weights_.reserve(merged.size());
  for (const auto& [key, pw] : merged) {
    mu.support_.push_back(pw.first);
    mu.weights_.push_back(pw.second / total);
  }
  return mu;
}

DiscreteMeasure dirac(double point, Interval domain) {
  const double w = 1.0;
  return make_measure({&point, 1}, {&w, 1}, domain);
}

double DiscreteMeasure::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) s += weights_[i] * support_[i];
  return s;
}

bool DiscreteMeasure::approx_equal(const DiscreteMeasure& other, double tol) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(support_[i] - other.support_[i]) > tol) return false;
    if (std::abs(weights_[i] - other.weights_[i]) > tol) return false;
  }
  return true;
}

double moment(const DiscreteMeasure& mu, const TabulatedFunction& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weights()[i] * g(mu.support()[i]);
  return s;
}

// ---------------------------------------------------------------------------
// QuantityOfInterest

QuantityOfInterest QuantityOfInterest::tail_probability(TabulatedFunction f, double threshold) {
  QuantityOfInterest q;
  q.kind_ = Kind::TailProbability;
  q.f_ = std::move(f);
  q.threshold_ = threshold;
  q.lower_ = 0.0;
  q.upper_ = 1.0;
  return q;
}

QuantityOfInterest QuantityOfInterest::expectation(TabulatedFunction f) {
  QuantityOfInterest q;
  q.kind_ = Kind::Expectation;
  q.lower_ = f.min_value();
  q.upper_ = f.max_value();
  q.f_ = std::move(f);
  return q;
}

QuantityOfInterest QuantityOfInterest::custom(
    std::vector<std::pair<DiscreteMeasure, double>> table) {
  if (table.empty()) fail(ErrorKind::LengthMismatch, "custom quantity of interest needs entries");
  QuantityOfInterest q;
  q.kind_ = Kind::Custom;
  q.lower_ = table.front().second;
  q.upper_ = table.front().second;
  for (const auto& [mu, v] : table) {
    q.lower_ = std::min(q.lower_, v);
    q.upper_ = std::max(q.upper_, v);
  }
  q.table_ = std::move(table);
  return q;
}

double QuantityOfInterest::atom_value(double f_value) const noexcept {
  if (kind_ == Kind::TailProbability) return f_value >= threshold_ ? 1.0 : 0.0;
  return f_value;
}

double QuantityOfInterest::table_value(const DiscreteMeasure& mu) const {
  for (const auto& [entry, v] : table_) {
    if (entry.approx_equal(mu)) return v;
  }
  fail(ErrorKind::UndefinedAtSupport, "measure not listed in custom quantity of interest");
}

double evaluate_qoi(const QuantityOfInterest& phi, const DiscreteMeasure& mu,
                    std::optional<std::span<const double>> f_values) {
  if (phi.kind() == QuantityOfInterest::Kind::Custom) return phi.table_value(mu);
  if (f_values && f_values->size() != mu.size()) {
    fail(ErrorKind::LengthMismatch, "one function value per atom required");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double fx = f_values ? (*f_values)[i] : phi.function()(mu.support()[i]);
    s += mu.weights()[i] * phi.atom_value(fx);
  }
  if (phi.kind() == QuantityOfInterest::Kind::TailProbability) s = std::clamp(s, 0.0, 1.0);
  return s;
}

// ---------------------------------------------------------------------------
// Data distributions

double DataDistribution::probability_of(const DataSymbol& symbol) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), symbol);
  if (it == alphabet.end() || *it != symbol) return 0.0;
  return probabilities[static_cast<std::size_t>(it - alphabet.begin())];
}

double multiset_count(std::size_t atoms, int n) noexcept {
  if (atoms == 0) return n == 0 ? 1.0 : 0.0;
  // C(n + atoms - 1, n)
  double c = 1.0;
  for (int i = 1; i <= n; ++i) c = c * static_cast<double>(atoms - 1 + i) / i;
  return std::round(c);
}

DataDistribution iid_data(const DiscreteMeasure& mu, int n, std::size_t cap) {
  if (n < 1) fail(ErrorKind::DomainError, "sample size must be positive");
  std::vector<double> xs, ws;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weights()[i] > 0.0) {
      xs.push_back(mu.support()[i]);
      ws.push_back(mu.weights()[i]);
    }
  }
  const std::size_t s = xs.size();
  if (multiset_count(s, n) > static_cast<double>(cap)) {
    fail(ErrorKind::AlphabetTooLarge, "multiset alphabet exceeds cap of " + std::to_string(cap));
  }

  std::vector<std::pair<DataSymbol, double>> entries;
  std::vector<int> counts(s, 0);
  // Depth-first over count vectors; coefficient built as a product of binomials.
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t i, int left, double p) {
    if (i + 1 == s) {
      counts[i] = left;
      double prob = p * std::pow(ws[i], left);
      DataSymbol sym;
      sym.reserve(static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < s; ++j) sym.insert(sym.end(), counts[j], xs[j]);
      entries.emplace_back(std::move(sym), prob);
      return;
    }
    double binom = 1.0;  // C(left, c)
    for (int c = 0; c <= left; ++c) {
      if (c > 0) binom = binom * (left - c + 1) / c;
      counts[i] = c;
      rec(i + 1, left - c, p * std::round(binom) * std::pow(ws[i], c));
    }
  };
  rec(0, n, 1.0);

  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  DataDistribution out;
  out.alphabet.reserve(entries.size());
  out.probabilities.reserve(entries.size());
  for (auto& [sym, p] : entries) {
    out.alphabet.push_back(std::move(sym));
    out.probabilities.push_back(p);
  }
  return out;
}

}  // namespace ouq
