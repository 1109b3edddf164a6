#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "ouq/minimax.hpp"
#include "support.hpp"

using namespace ouq;

namespace {

const Interval kUnit{0.0, 1.0};
const LossFunction kSq = LossFunction::squared();

Candidate bernoulli(double p, const DataMap& map) {
  const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 1.0}, std::vector<double>{1 - p, p}, kUnit);
  return make_candidate(mu, QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit)), map);
}

std::vector<Candidate> bernoullis(const std::vector<double>& ps, const DataMap& map) {
  std::vector<Candidate> cs;
  for (double p : ps) cs.push_back(bernoulli(p, map));
  return cs;
}

CandidateSet family(const oracle::Family& f) { return CandidateSet::from_table(f.phi, f.like); }

std::vector<double> tenth_grid() {
  std::vector<double> ps;
  for (int i = 0; i <= 10; ++i) ps.push_back(i / 10.0);
  return ps;
}

}  // namespace

TEST(BayesEstimator, SeparatingData) {
  const CandidateSet set(bernoullis({0.0, 1.0}, DataMap::iid(1)));
  const Estimator e = bayes_estimator(Prior::uniform(2), set, kSq);
  EXPECT_DOUBLE_EQ(e.value(0), 0.0);
  EXPECT_DOUBLE_EQ(e.value(1), 1.0);
}

TEST(BayesEstimator, TwoTermBayesRule) {
  const CandidateSet set(bernoullis({0.25, 0.75}, DataMap::iid(1)));
  const Estimator e = bayes_estimator(Prior::uniform(2), set, kSq);
  const auto hand = oracle::posterior_mean(oracle::bernoulli_counts({0.25, 0.75}, 1), {0.5, 0.5});
  EXPECT_DOUBLE_EQ(e.value(0), 0.375);
  EXPECT_DOUBLE_EQ(e.value(1), 0.625);
  EXPECT_DOUBLE_EQ(hand[0], 0.375);
}

TEST(BayesEstimator, SingleCandidate) {
  const CandidateSet set(bernoullis({0.3}, DataMap::iid(3)));
  const Estimator e = bayes_estimator(Prior::uniform(1), set, kSq);
  for (std::size_t d = 0; d < set.alphabet_size(); ++d) EXPECT_NEAR(e.value(d), 0.3, 1e-15);
}

TEST(BayesEstimator, NullSymbolsTakePriorMean) {
  const CandidateSet set(bernoullis({0.0, 0.5, 1.0}, DataMap::iid(1)));
  const Estimator e = bayes_estimator(Prior({0.5, 0.0, 0.5}), set, kSq);
  EXPECT_DOUBLE_EQ(e.value(0), 0.0);
  EXPECT_DOUBLE_EQ(e.value(1), 1.0);
  const Estimator f = bayes_estimator(Prior({1.0, 0.0, 0.0}), set, kSq);
  EXPECT_DOUBLE_EQ(f.value(1), 0.0);  // prior mean of Φ
}

TEST(BayesEstimator, ThresholdBestResponse) {
  // Posterior on Φ at symbol 0: masses on 0.1, 0.2, 0.9; an interval of
  // half-width 0.1 can capture 0.1 and 0.2 only if γ > 0.05.
  const CandidateSet set = CandidateSet::from_table({0.1, 0.2, 0.9}, {{1.0}, {1.0}, {1.0}});
  const Estimator e = bayes_estimator(Prior({0.3, 0.3, 0.4}), set, LossFunction::threshold(0.1));
  EXPECT_NEAR(e.value(0), 0.15, 1e-15);
  const Estimator g = bayes_estimator(Prior({0.3, 0.3, 0.4}), set, LossFunction::threshold(0.04));
  EXPECT_NEAR(g.value(0), 0.9, 1e-15);
}

TEST(BayesEstimator, Optimality) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 0.05);
  const CandidateSet set(bernoullis({0.1, 0.4, 0.5, 0.85}, DataMap::iid(2)));
  for (int t = 0; t < 10; ++t) {
    const Prior pi(oracle::random_simplex(rng, set.size()));
    const Estimator e = bayes_estimator(pi, set, kSq);
    const double base = averaged_risk(e, set, pi, kSq);
    for (int s = 0; s < 100; ++s) {
      std::vector<double> v = e.values();
      for (double& x : v) x += n(rng);
      EXPECT_GE(averaged_risk(Estimator::deterministic(v), set, pi, kSq), base - 1e-12);
    }
  }
}

TEST(BayesEstimator, OrthogonalityDecomposition) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const CandidateSet set(bernoullis({0.05, 0.3, 0.55, 0.9}, DataMap::iid(3)));
  for (int t = 0; t < 50; ++t) {
    const Prior pi(oracle::random_simplex(rng, set.size()));
    std::vector<double> v(set.alphabet_size());
    for (double& x : v) x = u(rng);
    const Estimator theta = Estimator::deterministic(v);
    const Estimator bayes = bayes_estimator(pi, set, kSq);
    double extra = 0.0;
    for (std::size_t d = 0; d < set.alphabet_size(); ++d) {
      double marginal = 0.0;
      for (std::size_t k = 0; k < set.size(); ++k) marginal += pi.weights[k] * set.likelihood(k, d);
      extra += marginal * (v[d] - bayes.value(d)) * (v[d] - bayes.value(d));
    }
    EXPECT_NEAR(averaged_risk(theta, set, pi, kSq), averaged_risk(bayes, set, pi, kSq) + extra, 1e-12);
  }
}

TEST(BayesEstimator, PriorLengthMismatch) {
  const CandidateSet set = CandidateSet::from_table({0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_EQ(kind_of([&] { bayes_estimator(Prior::uniform(3), set, kSq); }), ErrorKind::LengthMismatch);
}

TEST(LeastFavorablePrior, Identifiable) {
  const CandidateSet set(bernoullis({0.0, 1.0}, DataMap::iid(1)));
  EXPECT_NEAR(least_favorable_prior(set, kSq).bayes_risk, 0.0, 1e-15);
}

TEST(LeastFavorablePrior, SymmetricPairIsUniform) {
  const CandidateSet set(bernoullis({0.25, 0.75}, DataMap::iid(1)));
  const LeastFavorable lf = least_favorable_prior(set, kSq);
  EXPECT_NEAR(lf.prior.weights[0], 0.5, 1e-9);
  // Prior sweep on a 1e-3 grid peaks at 0.5.
  const auto fam = oracle::bernoulli_counts({0.25, 0.75}, 1);
  double best = -1.0, arg = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = oracle::bayes_risk(fam, {i / 1000.0, 1 - i / 1000.0});
    if (r > best + 1e-15) {
      best = r;
      arg = i / 1000.0;
    }
  }
  EXPECT_NEAR(arg, 0.5, 1e-12);
  EXPECT_NEAR(lf.bayes_risk, best, 1e-12);
}

TEST(LeastFavorablePrior, SingleCandidate) {
  const CandidateSet set(bernoullis({0.4}, DataMap::iid(2)));
  const LeastFavorable lf = least_favorable_prior(set, kSq);
  EXPECT_DOUBLE_EQ(lf.prior.weights[0], 1.0);
  EXPECT_DOUBLE_EQ(lf.bayes_risk, 0.0);
}

TEST(LeastFavorablePrior, BeatsRandomPriors) {
  std::mt19937_64 rng(10);
  const auto fam = oracle::bernoulli_counts({0.0, 0.2, 0.45, 0.6, 1.0}, 2);
  const LeastFavorable lf = least_favorable_prior(family(fam), kSq);
  for (int t = 0; t < 2000; ++t) {
    EXPECT_LE(oracle::bayes_risk(fam, oracle::random_simplex(rng, 5)), lf.bayes_risk + 1e-12);
  }
  EXPECT_NEAR(oracle::bayes_risk(fam, lf.prior.weights), lf.bayes_risk, 1e-14);
}

TEST(MinimaxEstimator, Identifiable) {
  const CandidateSet set(bernoullis({0.0, 1.0}, DataMap::iid(1)));
  const GameSolution g = minimax_estimator(set, kSq);
  EXPECT_NEAR(g.minimax_value, 0.0, 1e-15);
  EXPECT_NEAR(g.duality_gap, 0.0, 1e-15);
}

TEST(MinimaxEstimator, BernoulliGridAgainstLattice) {
  const auto fam = oracle::bernoulli_counts(tenth_grid(), 2);
  const GameSolution g = minimax_estimator(family(fam), kSq);
  EXPECT_EQ(g.status, GameStatus::Converged);
  EXPECT_LE(g.duality_gap, 1e-6);
  EXPECT_GE(g.duality_gap, -1e-12);
  const double lattice = oracle::lattice_minimax(fam, 0.0, 1.0, 200);
  EXPECT_LE(g.minimax_value, lattice + 1e-12);
  // Lattice spacing 0.005 limits how far the lattice optimum can lag.
  EXPECT_GE(g.minimax_value, lattice - 0.01);
  EXPECT_TRUE(g.estimator.is_pure());
  EXPECT_FALSE(g.estimator.is_randomized());
  // Over the whole unit interval the minimax risk is 1 / (4 (1 + √n)^2);
  // restricting to a sub-family can only lower it.
  const double rn = std::sqrt(2.0);
  EXPECT_LE(g.minimax_value, 1.0 / (4.0 * (1.0 + rn) * (1.0 + rn)) + 1e-12);
}

TEST(MinimaxEstimator, NoDataChebyshevCenter) {
  const CandidateSet set(bernoullis({0.1, 0.35, 0.7}, DataMap::no_data()));
  const GameSolution g = minimax_estimator(set, kSq);
  ASSERT_EQ(set.alphabet_size(), 1u);
  EXPECT_NEAR(g.estimator.value(0), 0.4, 1e-9);
  EXPECT_NEAR(g.minimax_value, 0.09, 1e-9);
  EXPECT_LE(g.duality_gap, 1e-6);
}

TEST(MinimaxEstimator, WeakDualityOnRandomFamilies) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> ps(2 + t % 6);
    for (double& p : ps) p = u(rng);
    const CandidateSet set(bernoullis(ps, DataMap::iid(1 + t % 3)));
    for (const LossFunction& loss : {kSq, LossFunction::threshold(0.05 + 0.3 * u(rng))}) {
      const GameSolution g = minimax_estimator(set, loss);
      EXPECT_LE(g.maximin_value, g.minimax_value + 1e-12);
      EXPECT_GE(g.duality_gap, -1e-12);
      EXPECT_NEAR(g.duality_gap, g.minimax_value - g.maximin_value, 1e-15);
      if (loss.kind == LossFunction::Kind::Squared) EXPECT_LE(g.duality_gap, 1e-6);
    }
  }
}

TEST(MinimaxEstimator, ThresholdNoDataValue) {
  // Φ ∈ {0, 1} without data: value 1/2 below γ = 1/2, 0 above.
  const CandidateSet set = CandidateSet::from_table({0.0, 1.0}, {{1.0}, {1.0}});
  EXPECT_NEAR(minimax_estimator(set, LossFunction::threshold(0.3)).minimax_value, 0.5, 1e-12);
  EXPECT_NEAR(minimax_estimator(set, LossFunction::threshold(0.5)).minimax_value, 0.5, 1e-12);
  EXPECT_NEAR(minimax_estimator(set, LossFunction::threshold(0.5001)).minimax_value, 0.0, 1e-12);
  // Three equally spaced values and a narrow interval: 2/3.
  const CandidateSet three = CandidateSet::from_table({0.0, 0.5, 1.0}, {{1.0}, {1.0}, {1.0}});
  const GameSolution g = minimax_estimator(three, LossFunction::threshold(0.1));
  EXPECT_NEAR(g.minimax_value, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(g.duality_gap, 0.0, 1e-9);
  EXPECT_TRUE(g.estimator.is_randomized());
}

TEST(CompareExperiments, MoreSamplesPreferred) {
  const auto cands = bernoullis(tenth_grid(), DataMap::iid(1));
  const ExperimentComparison c = compare_experiments(DataMap::iid(1), DataMap::iid(2), cands, kSq);
  EXPECT_EQ(c.preference, ExperimentPreference::SecondPreferable);
  EXPECT_LT(c.second.minimax_value, c.first.minimax_value);
}

TEST(CompareExperiments, IdenticalMapsEquivalent) {
  const auto cands = bernoullis({0.2, 0.5, 0.9}, DataMap::iid(1));
  EXPECT_EQ(compare_experiments(DataMap::iid(2), DataMap::iid(2), cands, kSq).preference,
            ExperimentPreference::Equivalent);
}

TEST(CompareExperiments, ConstantObservationIsNoData) {
  const auto cands = bernoullis({0.2, 0.5, 0.9}, DataMap::iid(1));
  const DataMap constant = DataMap::coarse(TabulatedFunction::constant(kUnit, 3.0), 1);
  const ExperimentComparison c = compare_experiments(constant, DataMap::iid(1), cands, kSq);
  EXPECT_NE(c.preference, ExperimentPreference::FirstPreferable);
  EXPECT_NEAR(c.first.minimax_value, 0.35 * 0.35, 1e-9);
}

TEST(CompareExperiments, ValueNonIncreasingInSampleSize) {
  const auto cands = bernoullis(tenth_grid(), DataMap::iid(1));
  double prev = 1.0;
  for (int n = 1; n <= 4; ++n) {
    const CandidateSet set(bernoullis(tenth_grid(), DataMap::iid(n)));
    const double v = minimax_estimator(set, kSq).minimax_value;
    EXPECT_LE(v, prev + 1e-9);
    prev = v;
  }
}

TEST(MixEstimators, SingleEstimator) {
  const CandidateSet set(bernoullis({0.2, 0.6}, DataMap::iid(1)));
  const Estimator e = Estimator::deterministic({0.3, 0.7});
  const MixResult m = mix_estimators(std::vector<Estimator>{e}, set, kSq);
  ASSERT_EQ(m.alpha.size(), 1u);
  EXPECT_DOUBLE_EQ(m.alpha[0], 1.0);
  EXPECT_DOUBLE_EQ(m.value, worst_case_error(e, set, kSq).value);
}

TEST(MixEstimators, Duplicates) {
  const CandidateSet set(bernoullis({0.2, 0.6}, DataMap::iid(1)));
  const Estimator e = Estimator::deterministic({0.3, 0.7});
  const MixResult m = mix_estimators(std::vector<Estimator>{e, e}, set, kSq);
  EXPECT_NEAR(m.value, worst_case_error(e, set, kSq).value, 1e-15);
}

TEST(MixEstimators, SymmetricBiasesCancel) {
  const CandidateSet set(bernoullis({0.2, 0.5, 0.8}, DataMap::iid(2)));
  std::vector<double> hi, lo;
  for (const auto& sym : set.alphabet()) {
    const double mean = (sym[0] + sym[1]) / 2;
    hi.push_back(mean + 0.2);
    lo.push_back(mean - 0.2);
  }
  const std::vector<Estimator> thetas{Estimator::deterministic(hi), Estimator::deterministic(lo)};
  const MixResult m = mix_estimators(thetas, set, kSq);
  EXPECT_NEAR(m.alpha[0], 0.5, 1e-6);
  // Sweep on a 1e-3 grid.
  double best = 1e9;
  for (int i = 0; i <= 1000; ++i) {
    std::vector<double> v(hi.size());
    for (std::size_t d = 0; d < v.size(); ++d) v[d] = i / 1000.0 * hi[d] + (1 - i / 1000.0) * lo[d];
    best = std::min(best, worst_case_error(Estimator::deterministic(v), set, kSq).value);
  }
  EXPECT_LE(m.value, best + 1e-12);
  EXPECT_LT(m.value, std::min(m.vertex_values[0], m.vertex_values[1]));
}

TEST(MixEstimators, RejectsThresholdLoss) {
  const CandidateSet set(bernoullis({0.2, 0.6}, DataMap::iid(1)));
  EXPECT_EQ(kind_of([&] {
              mix_estimators(std::vector<Estimator>{Estimator::deterministic({0.3, 0.7})}, set,
                             LossFunction::threshold(0.1));
            }),
            ErrorKind::NonConvexLoss);
}
