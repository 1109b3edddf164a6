#pragma once

// Losses, data maps, candidate families with a shared data alphabet,
// estimators and their statistical / worst-case / averaged risks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ouq/measure.hpp"

namespace ouq {

struct LossFunction {
  enum class Kind { Squared, Threshold };
  Kind kind = Kind::Squared;
  double gamma = 0.0;

  static LossFunction squared() { return {}; }
  /// 1 when |x| >= gamma (closed set), 0 otherwise. Requires gamma > 0.
  static LossFunction threshold(double gamma);

  double operator()(double x) const noexcept;
  bool convex() const noexcept { return kind == Kind::Squared; }
};

/// Maps a candidate measure to the law of the observed data.
class DataMap {
 public:
  enum class Kind { Iid, Coarse };

  /// n i.i.d. samples, observed as a multiset.
  static DataMap iid(int n, std::size_t cap = kDefaultAlphabetCap);
  /// n i.i.d. samples observed only through the label g(X).
  static DataMap coarse(TabulatedFunction g, int n, std::size_t cap = kDefaultAlphabetCap);
  /// A single uninformative symbol (coarse map with a constant label).
  static DataMap no_data();

  Kind kind() const noexcept { return kind_; }
  int sample_size() const noexcept { return n_; }
  const std::optional<TabulatedFunction>& label_function() const noexcept { return g_; }

  DataDistribution apply(const DiscreteMeasure& mu) const;

 private:
  Kind kind_ = Kind::Iid;
  int n_ = 1;
  std::optional<TabulatedFunction> g_;  // absent => constant label 0
  std::size_t cap_ = kDefaultAlphabetCap;
};

struct Candidate {
  DiscreteMeasure measure;
  std::optional<std::vector<double>> function_values;
  double phi_value = 0.0;
  DataDistribution data;
};

Candidate make_candidate(DiscreteMeasure mu, const QuantityOfInterest& phi, const DataMap& map,
                         std::optional<std::vector<double>> function_values = std::nullopt);
Candidate make_candidate(DiscreteMeasure mu, double phi_value, const DataMap& map);

/// Candidates aligned on the union of their data alphabets. Row k of the
/// likelihood table is the data distribution of candidate k.
class CandidateSet {
 public:
  CandidateSet() = default;
  explicit CandidateSet(std::vector<Candidate> candidates);

  /// Synthetic family given directly by Φ values and likelihood rows; the
  /// alphabet is {0}, {1}, ... Rows must each sum to 1.
  static CandidateSet from_table(std::vector<double> phi,
                                 const std::vector<std::vector<double>>& likelihood);

  std::size_t size() const noexcept { return phi_.size(); }
  bool empty() const noexcept { return phi_.empty(); }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  const std::vector<DataSymbol>& alphabet() const noexcept { return alphabet_; }
  const std::vector<Candidate>& candidates() const noexcept { return candidates_; }

  double likelihood(std::size_t k, std::size_t d) const noexcept { return table_[k * alphabet_.size() + d]; }
  std::span<const double> row(std::size_t k) const noexcept {
    return {table_.data() + k * alphabet_.size(), alphabet_.size()};
  }
  /// Symbols of row k with positive probability, by descending probability.
  std::span<const std::uint32_t> support_order(std::size_t k) const noexcept { return order_[k]; }

  double phi(std::size_t k) const noexcept { return phi_[k]; }
  const std::vector<double>& phis() const noexcept { return phi_; }
  double phi_min() const noexcept;
  double phi_max() const noexcept;

 private:
  void build_orders();

  std::vector<Candidate> candidates_;
  std::vector<DataSymbol> alphabet_;
  std::vector<double> table_;
  std::vector<double> phi_;
  std::vector<std::vector<std::uint32_t>> order_;
};

/// Deterministic (one value per symbol) or randomized (row-stochastic kernel
/// from symbols to a finite decision list) estimator.
class Estimator {
 public:
  Estimator() = default;
  static Estimator deterministic(std::vector<double> values);
  static Estimator randomized(std::vector<double> decisions, std::vector<double> kernel,
                              std::size_t alphabet_size);

  bool is_randomized() const noexcept { return !decisions_.empty(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double value(std::size_t d) const noexcept { return values_[d]; }
  const std::vector<double>& decisions() const noexcept { return decisions_; }
  std::span<const double> kernel_row(std::size_t d) const noexcept {
    return {kernel_.data() + d * decisions_.size(), decisions_.size()};
  }
  /// Expected decision at symbol d.
  double mean(std::size_t d) const noexcept;
  /// True when every kernel row is a point mass.
  bool is_pure() const noexcept;

  /// Σ coefficients_i · estimators_i (deterministic estimators only).
  static Estimator combine(std::span<const Estimator> estimators, std::span<const double> coefficients);

 private:
  std::size_t alphabet_size_ = 0;
  std::vector<double> values_;     // deterministic; for randomized, the row means
  std::vector<double> decisions_;  // randomized only
  std::vector<double> kernel_;
};

struct Prior {
  std::vector<double> weights;

  Prior() = default;
  /// Validates simplex membership (DomainError otherwise).
  explicit Prior(std::vector<double> w);
  static Prior uniform(std::size_t n);
  static Prior point_mass(std::size_t n, std::size_t k);
  std::size_t size() const noexcept { return weights.size(); }
};

/// E_{D ~ data_k}[V(θ(D) - Φ_k)]. Throws AlphabetMismatch.
double statistical_error(const Estimator& theta, const CandidateSet& set, std::size_t k,
                         const LossFunction& loss);

struct WorstCase {
  double value = 0.0;
  std::size_t argmax = 0;
};

/// Max over candidates, ties to the lowest index. Throws EmptyCandidates.
WorstCase worst_case_error(const Estimator& theta, const CandidateSet& set, const LossFunction& loss);

/// Statistical errors of θ at every candidate.
std::vector<double> risk_profile(const Estimator& theta, const CandidateSet& set,
                                 const LossFunction& loss);

struct BiasVariance {
  double variance = 0.0;
  double bias = 0.0;
  double mse = 0.0;
};

BiasVariance bias_variance(const Estimator& theta, const CandidateSet& set, std::size_t k);

/// Σ_k prior_k · statistical_error(θ, k). Throws LengthMismatch.
double averaged_risk(const Estimator& theta, const CandidateSet& set, const Prior& prior,
                     const LossFunction& loss);

}  // namespace ouq
