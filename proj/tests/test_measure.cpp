#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "ouq/error.hpp"
#include "ouq/measure.hpp"
#include "support.hpp"

using namespace ouq;

namespace {

const Interval kUnit{0.0, 1.0};

}  // namespace

TEST(MakeMeasure, TwoPointAverage) {
  const std::vector<double> x{0.0, 0.5}, w{0.5, 0.5};
  const DiscreteMeasure mu = make_measure(x, w, kUnit);
  EXPECT_DOUBLE_EQ(mu.mean(), 0.25);
  EXPECT_EQ(mu.size(), 2u);
}

TEST(MakeMeasure, SingleAtom) {
  const DiscreteMeasure mu = dirac(0.3, kUnit);
  ASSERT_EQ(mu.size(), 1u);
  EXPECT_DOUBLE_EQ(mu.support()[0], 0.3);
  EXPECT_DOUBLE_EQ(mu.weights()[0], 1.0);
}

TEST(MakeMeasure, MergesDuplicates) {
  const std::vector<double> x{0.2, 0.2}, w{0.5, 0.5};
  const DiscreteMeasure mu = make_measure(x, w, kUnit);
  ASSERT_EQ(mu.size(), 1u);
  EXPECT_DOUBLE_EQ(mu.weights()[0], 1.0);
}

TEST(MakeMeasure, KeepsCloseButDistinctAtoms) {
  const std::vector<double> x{0.2, 0.2 + 1e-9}, w{0.5, 0.5};
  EXPECT_EQ(make_measure(x, w, kUnit).size(), 2u);
}

TEST(MakeMeasure, Normalizes) {
  const std::vector<double> x{0.0, 1.0}, w{1.0, 3.0};
  const DiscreteMeasure mu = make_measure(x, w, kUnit);
  EXPECT_DOUBLE_EQ(mu.weights()[0], 0.25);
  EXPECT_DOUBLE_EQ(mu.weights()[1], 0.75);
}

TEST(MakeMeasure, Errors) {
  const std::vector<double> x{0.0, 0.5};
  EXPECT_EQ(kind_of([&] { make_measure(x, std::vector<double>{-0.1, 1.1}, kUnit); }), ErrorKind::NegativeWeight);
  EXPECT_EQ(kind_of([&] { make_measure(std::vector<double>{1.5}, std::vector<double>{1.0}, kUnit); }),
            ErrorKind::PointOutsideDomain);
  EXPECT_EQ(kind_of([&] { make_measure(x, std::vector<double>{0.0, 0.0}, kUnit); }), ErrorKind::ZeroTotalMass);
  EXPECT_EQ(kind_of([&] { make_measure(x, std::vector<double>{1.0}, kUnit); }), ErrorKind::LengthMismatch);
}

TEST(MakeMeasure, InvariantsOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(5), w(5);
    for (std::size_t i = 0; i < 5; ++i) {
      x[i] = std::round(u(rng) * 4) / 4;  // forces duplicates
      w[i] = u(rng);
    }
    const DiscreteMeasure mu = make_measure(x, w, kUnit);
    double total = 0.0;
    for (double wi : mu.weights()) {
      EXPECT_GE(wi, 0.0);
      total += wi;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (std::size_t i = 1; i < mu.size(); ++i) EXPECT_LT(mu.support()[i - 1], mu.support()[i]);
  }
}

TEST(Moment, Examples) {
  const TabulatedFunction id = TabulatedFunction::identity(kUnit);
  EXPECT_DOUBLE_EQ(moment(make_measure(std::vector<double>{0.0, 0.5}, std::vector<double>{0.5, 0.5}, kUnit), id),
                   0.25);
  EXPECT_DOUBLE_EQ(moment(dirac(0.7, kUnit), id), 0.7);
  const double m = 0.2, a = 0.8;
  const DiscreteMeasure markov =
      make_measure(std::vector<double>{0.0, a}, std::vector<double>{1 - m / a, m / a}, kUnit);
  EXPECT_NEAR(moment(markov, id), m, 1e-15);
}

TEST(Moment, UndefinedAtSupport) {
  const TabulatedFunction g({0.0, 0.5}, {0.0, 1.0});
  EXPECT_EQ(kind_of([&] { moment(dirac(0.9, kUnit), g); }), ErrorKind::UndefinedAtSupport);
}

TEST(TabulatedFunction, InterpolatesLinearly) {
  const TabulatedFunction f({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(f(0.5), 1.0);
  EXPECT_DOUBLE_EQ(f(1.5), 1.0);
  EXPECT_DOUBLE_EQ(f.max_value(), 2.0);
}

TEST(EvaluateQoi, TailProbability) {
  const QuantityOfInterest phi = QuantityOfInterest::tail_probability(TabulatedFunction::identity(kUnit), 0.5);
  const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 0.5}, std::vector<double>{0.5, 0.5}, kUnit);
  EXPECT_DOUBLE_EQ(evaluate_qoi(phi, mu), 0.5);
  EXPECT_DOUBLE_EQ(evaluate_qoi(phi, dirac(0.0, kUnit)), 0.0);
}

TEST(EvaluateQoi, Expectation) {
  const QuantityOfInterest phi = QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit));
  const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 1.0}, std::vector<double>{0.75, 0.25}, kUnit);
  EXPECT_DOUBLE_EQ(evaluate_qoi(phi, mu), 0.25);
}

TEST(EvaluateQoi, TailMonotoneInThreshold) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TabulatedFunction id = TabulatedFunction::identity(kUnit);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(4), w(4);
    for (std::size_t i = 0; i < 4; ++i) {
      x[i] = u(rng);
      w[i] = u(rng);
    }
    const DiscreteMeasure mu = make_measure(x, w, kUnit);
    double prev = 2.0;
    for (int i = 0; i <= 20; ++i) {
      const double v = evaluate_qoi(QuantityOfInterest::tail_probability(id, i / 20.0), mu);
      EXPECT_LE(v, prev);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(IidData, Binomial) {
  const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5, 0.5}, kUnit);
  const DataDistribution d = iid_data(mu, 2);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d.probability_of({0.0, 0.0}), 0.25);
  EXPECT_DOUBLE_EQ(d.probability_of({0.0, 1.0}), 0.5);
  EXPECT_DOUBLE_EQ(d.probability_of({1.0, 1.0}), 0.25);
}

TEST(IidData, Deterministic) {
  const DataDistribution d = iid_data(dirac(0.4, kUnit), 4);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.alphabet[0], (DataSymbol{0.4, 0.4, 0.4, 0.4}));
  EXPECT_DOUBLE_EQ(d.probabilities[0], 1.0);
}

TEST(IidData, ThreeDraws) {
  const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 1.0}, std::vector<double>{0.25, 0.75}, kUnit);
  EXPECT_NEAR(iid_data(mu, 3).probability_of({0.0, 1.0, 1.0}), 0.421875, 1e-15);
  const auto brute = oracle::iid_by_tuples({0.0, 1.0}, {0.25, 0.75}, 3);
  EXPECT_NEAR(brute.at({0.0, 1.0, 1.0}), 0.421875, 1e-15);
}

TEST(IidData, MatchesTupleEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t s = 1; s <= 6; ++s) {
    for (int n = 1; n <= 6; ++n) {
      std::vector<double> x(s), w(s);
      for (std::size_t i = 0; i < s; ++i) {
        x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(s);
        w[i] = 0.1 + u(rng);
      }
      const DiscreteMeasure mu = make_measure(x, w, kUnit);
      const std::vector<double> px(mu.support().begin(), mu.support().end());
      const std::vector<double> pw(mu.weights().begin(), mu.weights().end());
      const auto brute = oracle::iid_by_tuples(px, pw, n);
      const DataDistribution d = iid_data(mu, n);
      ASSERT_EQ(d.size(), brute.size());
      double total = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_NEAR(d.probabilities[i], brute.at(d.alphabet[i]), 1e-12);
        total += d.probabilities[i];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(IidData, DyadicWeightsExact) {
  const DiscreteMeasure mu =
      make_measure(std::vector<double>{0.0, 0.5, 1.0}, std::vector<double>{0.25, 0.5, 0.25}, kUnit);
  const auto brute = oracle::iid_by_tuples({0.0, 0.5, 1.0}, {0.25, 0.5, 0.25}, 4);
  const DataDistribution d = iid_data(mu, 4);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.probabilities[i], brute.at(d.alphabet[i]));
}

TEST(IidData, AlphabetCap) {
  std::vector<double> x(20), w(20, 1.0);
  for (std::size_t i = 0; i < 20; ++i) x[i] = static_cast<double>(i) / 20.0;
  const DiscreteMeasure mu = make_measure(x, w, kUnit);
  EXPECT_EQ(kind_of([&] { iid_data(mu, 10, 1000); }), ErrorKind::AlphabetTooLarge);
}
