#include <benchmark/benchmark.h>

#include "secbc/equivocation.hpp"
#include "secbc/region.hpp"
#include "secbc/simulate.hpp"

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

CodeParams params(int n) {
  const DegradedBcSpec spec = cascade();
  const ChainDistribution c = chain();
  auto [r, rp] = plan_code_rates(c, spec, 0.7, 0.02);
  return make_code_params(n, r, rp, 42);
}

}  // namespace

static void bm_codeword_generation(benchmark::State& state) {
  const CodeParams p = params(static_cast<int>(state.range(0)));
  const CodebookHierarchy book(chain(), p, 0);
  std::vector<long long> path = {0, 0};
  std::vector<int> out(static_cast<std::size_t>(p.n));
  long long i = 0;
  for (auto _ : state) {
    path[1] = i++ % p.codeword_counts[0];
    book.codeword_into(1, path, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_codeword_generation)->Arg(8)->Arg(16);

static void bm_ml_decode_trial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DegradedBcSpec spec = cascade();
  const ChainDistribution c = chain();
  const CodeParams p = params(n);
  const CodebookHierarchy book(c, p, 0);
  const MlDecoder dec(book, spec, 1);
  SplitRng rng(7);
  std::vector<long long> msg = {0, 0};
  TransmissionRecord rec = encode(book, msg, rng);
  transmit(rec, spec, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(rec.y[0]));
}
BENCHMARK(bm_ml_decode_trial)->Arg(8)->Arg(16);

static void bm_exact_equivocation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DegradedBcSpec spec = cascade();
  const CodeParams p = params(n);
  const CodebookHierarchy book(chain(), p, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        exact_equivocation(book, spec, MessageSubset::single(1)));
}
BENCHMARK(bm_exact_equivocation)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
