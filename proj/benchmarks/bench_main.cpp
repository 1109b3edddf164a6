#include <benchmark/benchmark.h>

#include <vector>

#include "ouq/confidence.hpp"
#include "ouq/minimax.hpp"
#include "ouq/ouq_solver.hpp"

using namespace ouq;

namespace {

const Interval kUnit{0.0, 1.0};

CandidateSet bernoulli_grid(int k, int n) {
  std::vector<Candidate> cs;
  for (int i = 1; i <= k; ++i) {
    const double p = static_cast<double>(i) / (k + 1);
    const DiscreteMeasure mu = make_measure(std::vector<double>{0.0, 1.0}, std::vector<double>{1 - p, p}, kUnit);
    cs.push_back(make_candidate(mu, QuantityOfInterest::expectation(TabulatedFunction::identity(kUnit)), DataMap::iid(n)));
  }
  return CandidateSet(std::move(cs));
}

}  // namespace

static void BM_MarkovUpperBound(benchmark::State& state) {
  const AdmissibleSet a(kUnit, uniform_grid(kUnit, 101),
                        {MomentConstraint{TabulatedFunction::identity(kUnit), ConstraintRelation::LessEqual, 0.25}});
  const QuantityOfInterest phi = QuantityOfInterest::tail_probability(TabulatedFunction::identity(kUnit), 0.5);
  SolverOptions o;
  o.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound(a, phi, o).value);
}
BENCHMARK(BM_MarkovUpperBound)->Arg(1)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_IidData(benchmark::State& state) {
  std::vector<double> pts, ws;
  for (int i = 0; i < 6; ++i) {
    pts.push_back(i / 5.0);
    ws.push_back(1.0);
  }
  const DiscreteMeasure mu = make_measure(pts, ws, kUnit);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iid_data(mu, n).size());
}
BENCHMARK(BM_IidData)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

static void BM_SquaredLossMinimax(benchmark::State& state) {
  const CandidateSet set = bernoulli_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(minimax_estimator(set, LossFunction::squared()).minimax_value);
}
BENCHMARK(BM_SquaredLossMinimax)->Args({9, 4})->Args({12, 20})->Args({12, 200})->Unit(benchmark::kMillisecond);

static void BM_ThresholdGame(benchmark::State& state) {
  const CandidateSet set = bernoulli_grid(9, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(threshold_game_value(0.1, set));
}
BENCHMARK(BM_ThresholdGame)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ConfidenceInterval(benchmark::State& state) {
  const CandidateSet set = bernoulli_grid(9, 4);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_confidence_interval(0.1, set).gamma_eps);
}
BENCHMARK(BM_ConfidenceInterval)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
