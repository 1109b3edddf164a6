#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "ouq/ouq_solver.hpp"
#include "support.hpp"

using namespace ouq;

namespace {

const Interval kUnit{0.0, 1.0};

AdmissibleSet mean_set(double m, ConstraintRelation rel, std::size_t grid = 101) {
  return AdmissibleSet(kUnit, uniform_grid(kUnit, grid),
                       {MomentConstraint{TabulatedFunction::identity(kUnit), rel, m}});
}

QuantityOfInterest tail(double a) {
  return QuantityOfInterest::tail_probability(TabulatedFunction::identity(kUnit), a);
}

SolverOptions quick() {
  SolverOptions o;
  o.restarts = 8;
  return o;
}

void expect_certificate(const BoundResult& r, const AdmissibleSet& a, const QuantityOfInterest& phi) {
  const auto fv = r.function_values ? std::optional<std::span<const double>>(*r.function_values) : std::nullopt;
  EXPECT_TRUE(is_feasible_on_support(r.extremizer, fv, a).feasible);
  EXPECT_NEAR(evaluate_qoi(phi, r.extremizer, fv), r.value, 1e-9);
}

}  // namespace

TEST(UpperBound, MarkovInstance) {
  const AdmissibleSet a = mean_set(0.25, ConstraintRelation::LessEqual);
  const BoundResult r = upper_bound(a, tail(0.5), quick());
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  expect_certificate(r, a, tail(0.5));
  EXPECT_EQ(r.status, SolveStatus::Converged);
}

TEST(UpperBound, SaturatedInstance) {
  const AdmissibleSet a = mean_set(0.6, ConstraintRelation::LessEqual);
  const BoundResult r = upper_bound(a, tail(0.5), quick());
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_NEAR(oracle::two_atom_tail(0.6, true, 0.5, true, 0.05, 0.01), 1.0, 1e-12);
  expect_certificate(r, a, tail(0.5));
}

TEST(UpperBound, Unconstrained) {
  const AdmissibleSet a(kUnit, uniform_grid(kUnit, 11));
  EXPECT_NEAR(upper_bound(a, tail(0.37), quick()).value, 1.0, 1e-12);
}

TEST(UpperBound, MatchesTwoAtomGridOracle) {
  for (double m : {0.1, 0.2, 0.3}) {
    for (double a : {0.4, 0.5, 0.8}) {
      const double brute = oracle::two_atom_tail(m, true, a, true, 0.05, 0.001);
      const double solved = upper_bound(mean_set(m, ConstraintRelation::LessEqual), tail(a), quick()).value;
      // The grid oracle can only under-estimate the supremum.
      EXPECT_GE(solved, brute - 1e-9);
      EXPECT_NEAR(solved, std::min(1.0, m / a), 1e-6);
    }
  }
}

TEST(LowerBound, MarkovInstanceIsZero) {
  const AdmissibleSet a = mean_set(0.3, ConstraintRelation::LessEqual);
  const BoundResult r = lower_bound(a, tail(0.6), quick());
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  expect_certificate(r, a, tail(0.6));
}

TEST(LowerBound, ExpectationIsZero) {
  const QuantityOfInterest phi = QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit));
  EXPECT_NEAR(lower_bound(mean_set(0.4, ConstraintRelation::LessEqual), phi, quick()).value, 0.0, 1e-12);
}

TEST(LowerBound, MeanAtLeastInstance) {
  const AdmissibleSet a = mean_set(0.9, ConstraintRelation::GreaterEqual);
  const BoundResult r = lower_bound(a, tail(0.5), quick());
  // Infimum 0.8 is approached by an atom just below 0.5; the grid oracle
  // with spacing h yields a value slightly above it.
  const double brute = oracle::two_atom_tail(0.9, false, 0.5, false, 0.01, 0.001);
  EXPECT_NEAR(r.value, 0.8, 1e-6);
  EXPECT_LE(r.value, brute + 1e-9);
  expect_certificate(r, a, tail(0.5));
}

TEST(Certify, Trichotomy) {
  const AdmissibleSet markov = mean_set(0.25, ConstraintRelation::LessEqual);
  EXPECT_EQ(certify(markov, tail(0.5), 0.6, quick()).verdict, Certification::Safe);
  const CertifyResult und = certify(markov, tail(0.5), 0.4, quick());
  EXPECT_EQ(und.verdict, Certification::Undecided);
  EXPECT_NEAR(und.lower.value, 0.0, 1e-12);
  EXPECT_NEAR(und.upper.value, 0.5, 1e-9);
  EXPECT_EQ(certify(mean_set(0.9, ConstraintRelation::GreaterEqual), tail(0.5), 0.5, quick()).verdict,
            Certification::Unsafe);
  EXPECT_EQ(classify(0.0, 0.5, 0.5), Certification::Safe);
  EXPECT_EQ(classify(0.5, 0.7, 0.5), Certification::Undecided);
}

TEST(Certify, RejectsNonTailQuantity) {
  const QuantityOfInterest phi = QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit));
  EXPECT_EQ(kind_of([&] { certify(mean_set(0.5, ConstraintRelation::LessEqual), phi, 0.5, quick()); }),
            ErrorKind::DomainError);
}

TEST(MarkovOracle, Values) {
  EXPECT_DOUBLE_EQ(markov_oracle(0.25, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(markov_oracle(0.1, 1.0), 0.1);
  EXPECT_NEAR(markov_oracle(0.5, 0.5001), 0.99980004, 1e-8);
  EXPECT_EQ(kind_of([] { markov_oracle(0.5, 0.4); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { markov_oracle(0.0, 0.4); }), ErrorKind::DomainError);
}

TEST(Solver, InfeasibleSet) {
  EXPECT_EQ(kind_of([] { upper_bound(mean_set(-0.5, ConstraintRelation::LessEqual), tail(0.5)); }),
            ErrorKind::InfeasibleSet);
}

TEST(Solver, LowerNeverExceedsUpper) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 10; ++t) {
    const AdmissibleSet a = mean_set(u(rng), t % 2 ? ConstraintRelation::LessEqual : ConstraintRelation::GreaterEqual);
    const QuantityOfInterest phi = tail(u(rng));
    EXPECT_LE(lower_bound(a, phi, quick()).value, upper_bound(a, phi, quick()).value + 1e-12);
  }
}

TEST(Solver, AddingConstraintsShrinksBounds) {
  const std::vector<double> grid = uniform_grid(kUnit, 51);
  const TabulatedFunction id = TabulatedFunction::identity(kUnit);
  const TabulatedFunction sq = TabulatedFunction::sample(grid, [](double x) { return x * x; });
  const AdmissibleSet one(kUnit, grid, {MomentConstraint{id, ConstraintRelation::LessEqual, 0.4}});
  const AdmissibleSet two = one.with_constraint(MomentConstraint{sq, ConstraintRelation::GreaterEqual, 0.1});
  const QuantityOfInterest phi = tail(0.7);
  EXPECT_LE(upper_bound(two, phi, quick()).value, upper_bound(one, phi, quick()).value + 1e-12);
  EXPECT_GE(lower_bound(two, phi, quick()).value, lower_bound(one, phi, quick()).value - 1e-12);
}

TEST(Solver, DeterministicGivenSeed) {
  const std::vector<double> grid = uniform_grid(kUnit, 41);
  const TabulatedFunction sq = TabulatedFunction::sample(grid, [](double x) { return x * x; });
  const AdmissibleSet a(kUnit, grid,
                        {MomentConstraint{TabulatedFunction::identity(kUnit), ConstraintRelation::LessEqual, 0.3},
                         MomentConstraint{sq, ConstraintRelation::GreaterEqual, 0.12}});
  SolverOptions o = quick();
  o.seed = 99;
  const BoundResult r1 = upper_bound(a, tail(0.6), o);
  o.threads = 3;
  const BoundResult r2 = upper_bound(a, tail(0.6), o);
  EXPECT_EQ(r1.value, r2.value);
  EXPECT_TRUE(r1.extremizer.approx_equal(r2.extremizer, 0.0));
  ASSERT_EQ(r1.trace.per_restart.size(), r2.trace.per_restart.size());
  for (std::size_t i = 0; i < r1.trace.per_restart.size(); ++i) {
    EXPECT_EQ(r1.trace.per_restart[i].best_value, r2.trace.per_restart[i].best_value);
  }
}

TEST(Solver, FunctionBandExpectation) {
  // sup E[f] with |f - id| <= 0.1 and E[X] <= 0.3 is 0.3 + 0.1.
  const std::vector<double> grid = uniform_grid(kUnit, 11);
  const AdmissibleSet a(kUnit, grid,
                        {MomentConstraint{TabulatedFunction::identity(kUnit), ConstraintRelation::LessEqual, 0.3}},
                        FunctionBand{TabulatedFunction::identity(kUnit), 0.1});
  const QuantityOfInterest phi = QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit));
  const BoundResult r = upper_bound(a, phi, quick());
  EXPECT_NEAR(r.value, 0.4, 1e-9);
  ASSERT_TRUE(r.function_values.has_value());
  expect_certificate(r, a, phi);
}

TEST(Solver, BandedTailProbability) {
  // f may be lifted by 0.1, so μ[f >= 0.5] is bounded by μ[X >= 0.4] <= m / 0.4.
  const std::vector<double> grid = uniform_grid(kUnit, 11);
  const AdmissibleSet a(kUnit, grid,
                        {MomentConstraint{TabulatedFunction::identity(kUnit), ConstraintRelation::LessEqual, 0.2}},
                        FunctionBand{TabulatedFunction::identity(kUnit), 0.1});
  const BoundResult r = upper_bound(a, tail(0.5), quick());
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  expect_certificate(r, a, tail(0.5));
}
