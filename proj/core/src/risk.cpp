#include "ouq/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ouq/error.hpp"
#include "ouq/simplex.hpp"

namespace ouq {
namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, "risk", what); }

void check_alphabet(const Estimator& theta, const CandidateSet& set) {
  if (theta.alphabet_size() != set.alphabet_size()) {
    fail(ErrorKind::AlphabetMismatch, "estimator defined on " + std::to_string(theta.alphabet_size()) +
                                          " symbols, family has " + std::to_string(set.alphabet_size()));
  }
}

// Expected loss of the decision at symbol d against target value phi.
double symbol_loss(const Estimator& theta, std::size_t d, double phi, const LossFunction& loss) {
  if (!theta.is_randomized()) return loss(theta.value(d) - phi);
  const auto row = theta.kernel_row(d);
  const auto& dec = theta.decisions();
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.0) s += row[j] * loss(dec[j] - phi);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

LossFunction LossFunction::threshold(double gamma) {
  if (!(gamma > 0.0)) fail(ErrorKind::DomainError, "threshold loss requires gamma > 0");
  return {Kind::Threshold, gamma};
}

double LossFunction::operator()(double x) const noexcept {
  if (kind == Kind::Squared) return x * x;
  return std::abs(x) >= gamma ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------

DataMap DataMap::iid(int n, std::size_t cap) {
  if (n < 1) fail(ErrorKind::DomainError, "sample size must be positive");
  DataMap m;
  m.kind_ = Kind::Iid;
  m.n_ = n;
  m.cap_ = cap;
  return m;
}

DataMap DataMap::coarse(TabulatedFunction g, int n, std::size_t cap) {
  if (n < 1) fail(ErrorKind::DomainError, "sample size must be positive");
  DataMap m;
  m.kind_ = Kind::Coarse;
  m.n_ = n;
  m.g_ = std::move(g);
  m.cap_ = cap;
  return m;
}

DataMap DataMap::no_data() {
  DataMap m;
  m.kind_ = Kind::Coarse;
  m.n_ = 1;
  return m;
}

DataDistribution DataMap::apply(const DiscreteMeasure& mu) const {
  if (kind_ == Kind::Iid) return iid_data(mu, n_, cap_);
  std::vector<double> labels;
  labels.reserve(mu.size());
  for (double x : mu.support()) labels.push_back(g_ ? (*g_)(x) : 0.0);
  const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
  const std::vector<double> ws(mu.weights().begin(), mu.weights().end());
  return iid_data(make_measure(labels, ws, Interval{*lo, *hi}), n_, cap_);
}

Candidate make_candidate(DiscreteMeasure mu, const QuantityOfInterest& phi, const DataMap& map,
                         std::optional<std::vector<double>> function_values) {
  Candidate c;
  c.phi_value = function_values ? evaluate_qoi(phi, mu, std::span<const double>(*function_values))
                                : evaluate_qoi(phi, mu);
  c.data = map.apply(mu);
  c.measure = std::move(mu);
  c.function_values = std::move(function_values);
  return c;
}

Candidate make_candidate(DiscreteMeasure mu, double phi_value, const DataMap& map) {
  Candidate c;
  c.phi_value = phi_value;
  c.data = map.apply(mu);
  c.measure = std::move(mu);
  return c;
}

// ---------------------------------------------------------------------------

CandidateSet::CandidateSet(std::vector<Candidate> candidates) : candidates_(std::move(candidates)) {
  for (const auto& c : candidates_) {
    alphabet_.insert(alphabet_.end(), c.data.alphabet.begin(), c.data.alphabet.end());
  }
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());

  const std::size_t dsize = alphabet_.size();
  table_.assign(candidates_.size() * dsize, 0.0);
  for (std::size_t k = 0; k < candidates_.size(); ++k) {
    const auto& dd = candidates_[k].data;
    double total = 0.0;
    for (std::size_t j = 0; j < dd.size(); ++j) {
      auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), dd.alphabet[j]);
      table_[k * dsize + static_cast<std::size_t>(it - alphabet_.begin())] = dd.probabilities[j];
      total += dd.probabilities[j];
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      fail(ErrorKind::NumericalFailure, "candidate data distribution does not sum to one");
    }
    phi_.push_back(candidates_[k].phi_value);
  }
  build_orders();
}

CandidateSet CandidateSet::from_table(std::vector<double> phi,
                                      const std::vector<std::vector<double>>& likelihood) {
  if (phi.size() != likelihood.size()) fail(ErrorKind::LengthMismatch, "one likelihood row per candidate");
  CandidateSet s;
  const std::size_t dsize = likelihood.empty() ? 0 : likelihood.front().size();
  for (std::size_t d = 0; d < dsize; ++d) s.alphabet_.push_back({static_cast<double>(d)});
  s.table_.reserve(phi.size() * dsize);
  for (const auto& row : likelihood) {
    if (row.size() != dsize) fail(ErrorKind::LengthMismatch, "likelihood rows differ in length");
    if (!on_simplex(row, kMassTolerance)) fail(ErrorKind::DomainError, "likelihood row is not a distribution");
    s.table_.insert(s.table_.end(), row.begin(), row.end());
  }
  s.phi_ = std::move(phi);
  s.build_orders();
  return s;
}

void CandidateSet::build_orders() {
  const std::size_t dsize = alphabet_.size();
  order_.assign(phi_.size(), {});
  for (std::size_t k = 0; k < phi_.size(); ++k) {
    auto& ord = order_[k];
    for (std::size_t d = 0; d < dsize; ++d) {
      if (table_[k * dsize + d] > 0.0) ord.push_back(static_cast<std::uint32_t>(d));
    }
    std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      return table_[k * dsize + a] > table_[k * dsize + b];
    });
  }
}

double CandidateSet::phi_min() const noexcept { return *std::min_element(phi_.begin(), phi_.end()); }
double CandidateSet::phi_max() const noexcept { return *std::max_element(phi_.begin(), phi_.end()); }

// ---------------------------------------------------------------------------

Estimator Estimator::deterministic(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorKind::DomainError, "estimator values must be finite");
  }
  Estimator e;
  e.alphabet_size_ = values.size();
  e.values_ = std::move(values);
  return e;
}

Estimator Estimator::randomized(std::vector<double> decisions, std::vector<double> kernel,
                                std::size_t alphabet_size) {
  if (decisions.empty() || kernel.size() != decisions.size() * alphabet_size) {
    fail(ErrorKind::LengthMismatch, "kernel shape does not match alphabet x decisions");
  }
  Estimator e;
  e.alphabet_size_ = alphabet_size;
  e.decisions_ = std::move(decisions);
  e.kernel_ = std::move(kernel);
  e.values_.resize(alphabet_size);
  for (std::size_t d = 0; d < alphabet_size; ++d) {
    const auto row = e.kernel_row(d);
    if (!on_simplex(row, kMassTolerance)) fail(ErrorKind::DomainError, "kernel row is not a distribution");
    double m = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) m += row[j] * e.decisions_[j];
    e.values_[d] = m;
  }
  return e;
}

double Estimator::mean(std::size_t d) const noexcept { return values_[d]; }

bool Estimator::is_pure() const noexcept {
  if (!is_randomized()) return true;
  for (std::size_t d = 0; d < alphabet_size_; ++d) {
    const auto row = kernel_row(d);
    if (std::count_if(row.begin(), row.end(), [](double p) { return p > 0.0; }) > 1) return false;
  }
  return true;
}

Estimator Estimator::combine(std::span<const Estimator> estimators, std::span<const double> coefficients) {
  if (estimators.empty() || estimators.size() != coefficients.size()) {
    fail(ErrorKind::LengthMismatch, "one coefficient per estimator");
  }
  const std::size_t dsize = estimators.front().alphabet_size();
  std::vector<double> v(dsize, 0.0);
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    if (estimators[i].is_randomized()) fail(ErrorKind::DomainError, "only deterministic estimators combine");
    if (estimators[i].alphabet_size() != dsize) fail(ErrorKind::AlphabetMismatch, "estimator alphabets differ");
    for (std::size_t d = 0; d < dsize; ++d) v[d] += coefficients[i] * estimators[i].value(d);
  }
  return deterministic(std::move(v));
}

// ---------------------------------------------------------------------------

Prior::Prior(std::vector<double> w) : weights(std::move(w)) {
  if (weights.empty() || !on_simplex(weights, kMassTolerance)) {
    fail(ErrorKind::DomainError, "prior weights must lie on the simplex");
  }
}

Prior Prior::uniform(std::size_t n) { return Prior(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

Prior Prior::point_mass(std::size_t n, std::size_t k) {
  std::vector<double> w(n, 0.0);
  w.at(k) = 1.0;
  return Prior(std::move(w));
}

// ---------------------------------------------------------------------------

double statistical_error(const Estimator& theta, const CandidateSet& set, std::size_t k,
                         const LossFunction& loss) {
  check_alphabet(theta, set);
  const double phi = set.phi(k);
  double s = 0.0;
  for (std::uint32_t d : set.support_order(k)) {
    s += set.likelihood(k, d) * symbol_loss(theta, d, phi, loss);
  }
  return s;
}

std::vector<double> risk_profile(const Estimator& theta, const CandidateSet& set,
                                 const LossFunction& loss) {
  std::vector<double> r(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) r[k] = statistical_error(theta, set, k, loss);
  return r;
}

WorstCase worst_case_error(const Estimator& theta, const CandidateSet& set, const LossFunction& loss) {
  if (set.empty()) fail(ErrorKind::EmptyCandidates, "worst case over an empty candidate list");
  WorstCase w{-1.0, 0};
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double r = statistical_error(theta, set, k, loss);
    if (r > w.value) w = {r, k};
  }
  return w;
}

BiasVariance bias_variance(const Estimator& theta, const CandidateSet& set, std::size_t k) {
  check_alphabet(theta, set);
  const auto& dec = theta.decisions();
  double mean = 0.0;
  for (std::uint32_t d : set.support_order(k)) mean += set.likelihood(k, d) * theta.mean(d);
  double var = 0.0;
  for (std::uint32_t d : set.support_order(k)) {
    if (!theta.is_randomized()) {
      const double dev = theta.value(d) - mean;
      var += set.likelihood(k, d) * dev * dev;
    } else {
      const auto row = theta.kernel_row(d);
      double inner = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) inner += row[j] * (dec[j] - mean) * (dec[j] - mean);
      var += set.likelihood(k, d) * inner;
    }
  }
  BiasVariance bv;
  bv.variance = var;
  bv.bias = mean - set.phi(k);
  bv.mse = statistical_error(theta, set, k, LossFunction::squared());
  return bv;
}

double averaged_risk(const Estimator& theta, const CandidateSet& set, const Prior& prior,
                     const LossFunction& loss) {
  if (prior.size() != set.size()) fail(ErrorKind::LengthMismatch, "prior length differs from candidate count");
  double s = 0.0;
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (prior.weights[k] > 0.0) s += prior.weights[k] * statistical_error(theta, set, k, loss);
  }
  return s;
}

}  // namespace ouq
