#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ouq/confidence.hpp"
#include "support.hpp"

using namespace ouq;

namespace {

const Interval kUnit{0.0, 1.0};

CandidateSet no_data(const std::vector<double>& phis) {
  std::vector<std::vector<double>> rows(phis.size(), std::vector<double>{1.0});
  return CandidateSet::from_table(phis, rows);
}

CandidateSet bernoullis(const std::vector<double>& ps, int n) {
  std::vector<Candidate> cs;
  for (double p : ps) {
    const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 1.0}, std::vector<double>{1 - p, p}, kUnit);
    cs.push_back(make_candidate(mu, QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit)),
                                DataMap::iid(n)));
  }
  return CandidateSet(std::move(cs));
}

}  // namespace

TEST(ThresholdGameValue, RangeDominated) {
  EXPECT_NEAR(threshold_game_value(1.2, no_data({0.0, 0.4, 1.0})), 0.0, 1e-12);
}

TEST(ThresholdGameValue, TinyGammaWithoutData) {
  const double v = threshold_game_value(1e-4, no_data({0.0, 1.0}));
  EXPECT_NEAR(v, 0.5, 1e-12);
  // With more distinct values a narrow interval misses nearly everyone.
  EXPECT_NEAR(threshold_game_value(1e-4, no_data({0.0, 0.25, 0.5, 0.75, 1.0})), 0.8, 1e-12);
}

TEST(ThresholdGameValue, Identifiable) {
  const CandidateSet set = bernoullis({0.0, 1.0}, 1);
  for (double g : {1e-3, 0.1, 0.7}) EXPECT_NEAR(threshold_game_value(g, set), 0.0, 1e-12);
  EXPECT_EQ(kind_of([&] { threshold_game_value(0.0, set); }), ErrorKind::DomainError);
}

TEST(ThresholdGameValue, NonIncreasingInGamma) {
  const CandidateSet set = bernoullis({0.1, 0.3, 0.5, 0.7, 0.9}, 2);
  double prev = 2.0;
  for (int i = 1; i <= 30; ++i) {
    const double v = threshold_game_value(i / 30.0, set);
    EXPECT_LE(v, prev + 1e-9);
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
    prev = v;
  }
}

TEST(OptimalConfidence, NoDataEpsilonZero) {
  const CandidateSet set = no_data({0.2, 0.5, 0.9});
  const ConfidenceResult r = optimal_confidence_interval(0.0, set);
  EXPECT_NEAR(r.gamma_eps, 0.35, 1e-6);
  EXPECT_GE(r.gamma_eps, 0.35);
  EXPECT_NEAR(r.estimator.value(0), 0.55, 1e-9);
  EXPECT_LE(r.game_value_at_gamma, 1e-9);
}

TEST(OptimalConfidence, NoDataEpsilonOne) {
  const CandidateSet set = no_data({0.2, 0.5, 0.9});
  const ConfidenceResult r = optimal_confidence_interval(1.0, set);
  EXPECT_LE(r.gamma_eps, 1e-6);
  EXPECT_NEAR(r.estimator.value(0), 0.55, 1e-9);
}

TEST(OptimalConfidence, IdentifiableFamily) {
  const CandidateSet set = bernoullis({0.0, 1.0}, 1);
  for (double eps : {0.0, 0.3, 1.0}) EXPECT_LE(optimal_confidence_interval(eps, set).gamma_eps, 1e-6);
}

TEST(OptimalConfidence, NearOptimalAndCovering) {
  const CandidateSet set = bernoullis({0.1, 0.3, 0.5, 0.7, 0.9}, 3);
  double prev_gamma = 2.0;
  for (double eps : {0.05, 0.2, 0.4, 0.7}) {
    const ConfidenceResult r = optimal_confidence_interval(eps, set);
    EXPECT_LE(r.game_value_at_gamma, eps + 1e-9);
    if (r.gamma_eps > 1e-6) EXPECT_GT(threshold_game_value(r.gamma_eps - 1e-6, set), eps);
    // Coverage of the mixed solution, by direct evaluation.
    EXPECT_LE(worst_case_error(r.randomized_estimator, set, LossFunction::threshold(r.gamma_eps)).value, eps + 1e-6);
    EXPECT_LE(r.gamma_eps, prev_gamma + 1e-12);
    prev_gamma = r.gamma_eps;
    // Monotone trace.
    auto trace = r.bisection_trace;
    std::sort(trace.begin(), trace.end());
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i].second, trace[i - 1].second + 1e-9);
  }
}

TEST(OptimalConfidence, IntervalAndCurve) {
  const ConfidenceResult r = optimal_confidence_interval(0.0, no_data({0.0, 1.0}));
  const auto [lo, hi] = r.interval(0);
  EXPECT_LE(lo, 0.0);
  EXPECT_GE(hi, 1.0);
  const std::string csv = curve_csv(r);
  EXPECT_EQ(csv.rfind("gamma,value\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.bisection_trace.size() + 1);
}

TEST(OptimalConfidence, RejectsBadEpsilon) {
  EXPECT_EQ(kind_of([] { optimal_confidence_interval(1.5, no_data({0.0, 1.0})); }), ErrorKind::DomainError);
}

TEST(MidpointEstimator, MarkovInstance) {
  const AdmissibleSet a(kUnit, uniform_grid(kUnit, 101),
                        {MomentConstraint{TabulatedFunction::identity(kUnit), ConstraintRelation::LessEqual, 0.25}});
  const QuantityOfInterest phi = QuantityOfInterest::tail_probability(TabulatedFunction::identity(kUnit), 0.5);
  SolverOptions o;
  o.restarts = 4;
  EXPECT_NEAR(midpoint_estimator(a, phi, o), 0.25, 1e-9);
}

TEST(MidpointEstimator, DegenerateAndSymmetric) {
  // E[X] = 0.3 pins the expectation.
  const AdmissibleSet pinned(kUnit, uniform_grid(kUnit, 11),
                             {MomentConstraint{TabulatedFunction::identity(kUnit), ConstraintRelation::Equal, 0.3}});
  const QuantityOfInterest mean = QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit));
  SolverOptions o;
  o.restarts = 4;
  EXPECT_NEAR(midpoint_estimator(pinned, mean, o), 0.3, 1e-9);
  const AdmissibleSet free(kUnit, uniform_grid(kUnit, 11));
  EXPECT_NEAR(midpoint_estimator(free, mean, o), 0.5, 1e-12);
}
