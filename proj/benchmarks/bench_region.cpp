#include <benchmark/benchmark.h>

#include "secbc/region.hpp"

using namespace secbc;

namespace {

DegradedBcSpec cascade() {
  return {2,
          DiscreteChannel::binary_symmetric(0.05),
          {DiscreteChannel::binary_symmetric(0.1),
           DiscreteChannel::binary_symmetric(0.15)}};
}

ChainDistribution chain() {
  return ChainDistribution(2, {DiscreteChannel::constant_row(1, {0.5, 0.5}),
                               DiscreteChannel::binary_symmetric(0.11)});
}

}  // namespace

static void bm_induced_joint(benchmark::State& state) {
  const DegradedBcSpec spec = cascade();
  const ChainDistribution c = chain();
  for (auto _ : state) benchmark::DoNotOptimize(induced_joint(c, spec));
}
BENCHMARK(bm_induced_joint);

static void bm_rate_tuple(benchmark::State& state) {
  const DegradedBcSpec spec = cascade();
  const ChainDistribution c = chain();
  for (auto _ : state) benchmark::DoNotOptimize(rate_tuple(c, spec));
}
BENCHMARK(bm_rate_tuple);

static void bm_maximize(benchmark::State& state) {
  const DegradedBcSpec spec = cascade();
  OptimizerOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  opts.max_iterations = 40;
  opts.seed = 11;
  const std::vector<double> w = {0.5, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(maximize_weighted_sum(spec, w, opts));
}
BENCHMARK(bm_maximize)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
