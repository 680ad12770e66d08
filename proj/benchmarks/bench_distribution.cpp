#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "secbc/distribution.hpp"

using namespace secbc;

namespace {

Distribution random_table(unsigned seed, std::vector<int> cards) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);
  std::vector<double> mass(total);
  double sum = 0.0;
  for (double& v : mass) {
    v = u(gen);
    sum += v;
  }
  for (double& v : mass) v /= sum;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cards.size(); ++i)
    labels.push_back("V" + std::to_string(i));
  return Distribution(std::move(labels), std::move(cards), std::move(mass));
}

}  // namespace

static void bm_entropy(benchmark::State& state) {
  Distribution d = random_table(1, {4, 4, 4, 4});
  for (auto _ : state) benchmark::DoNotOptimize(entropy(d));
}
BENCHMARK(bm_entropy);

static void bm_marginal(benchmark::State& state) {
  Distribution d = random_table(2, {4, 4, 4, 4});
  const std::vector<std::string> keep = {"V0", "V2"};
  for (auto _ : state) benchmark::DoNotOptimize(marginal(d, keep));
}
BENCHMARK(bm_marginal);

static void bm_conditional_mi(benchmark::State& state) {
  Distribution d = random_table(3, {3, 3, 3, 3, 3});
  const std::vector<std::string> cond = {"V2", "V3"};
  for (auto _ : state)
    benchmark::DoNotOptimize(conditional_mutual_information(d, "V0", "V1", cond));
}
BENCHMARK(bm_conditional_mi);

BENCHMARK_MAIN();
