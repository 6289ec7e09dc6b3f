#include <benchmark/benchmark.h>

#include "ccnauction/chain.hpp"
#include "ccnauction/config.hpp"
#include "ccnauction/hjb.hpp"
#include "ccnauction/obsa.hpp"

namespace {

ccn::BidDistribution table1_bids() {
  return ccn::BidDistribution::uniform(ccn::BidGrid(48.0, 312.0, 1.0));
}

void BM_BuildChain(benchmark::State& state) {
  const auto bids = table1_bids();
  for (auto _ : state) {
    auto model = ccn::build_chain(bids, 10.0, 0.5);
    benchmark::DoNotOptimize(model.P.sum());
  }
}
BENCHMARK(BM_BuildChain);

void BM_LeavingProbabilities(benchmark::State& state) {
  const auto model = ccn::build_chain(table1_bids(), 10.0, 0.5);
  const long delta = state.range(0);
  for (auto _ : state) {
    auto theta = ccn::leaving_probabilities(model, ccn::Mechanism::SecondPrice, delta);
    benchmark::DoNotOptimize(theta.sum());
  }
}
BENCHMARK(BM_LeavingProbabilities)->Arg(5)->Arg(100)->Arg(10000);

void BM_SolveCurve(benchmark::State& state) {
  const auto cfg = ccn::preset_config("table2");
  const auto p = ccn::make_stage_two(cfg, 0.1);
  for (auto _ : state) {
    auto curve = ccn::solve_second_price_curve(p, p.Tp / 2000.0);
    benchmark::DoNotOptimize(curve.values.back());
  }
}
BENCHMARK(BM_SolveCurve);

void BM_SimulateEpisode(benchmark::State& state) {
  const ccn::MarketConfig mc{table1_bids(), 10.0, 3, 0.5, 0};
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto log = ccn::simulate_obsa(mc, ccn::Mechanism::SecondPrice, 50, seed++);
    benchmark::DoNotOptimize(log.income);
  }
}
BENCHMARK(BM_SimulateEpisode);

}  // namespace

BENCHMARK_MAIN();
