#ifndef SECBC_REGION_HPP
#define SECBC_REGION_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "secbc/chain.hpp"
#include "secbc/channel.hpp"
#include "secbc/distribution.hpp"

namespace secbc {

// Secrecy rates per receiver, bits per channel use, clamped at 0.
struct RateTuple {
  std::vector<double> rates;
};

// Randomization (subcode) rates per receiver: the wiretapper's conditional
// information rate per layer minus the slack tau, clamped at 0.
struct RandomizationRates {
  std::vector<double> rates;
  double tau = 0.0;
};

// Full single-letter joint over (U_K, ..., U_2, X, Y_1, ..., Y_K, Z)
// induced by a chain and a degraded spec. Sums to 1.
Distribution induced_joint(const ChainDistribution& chain, const DegradedBcSpec& spec);

// Pre-clamp secrecy-rate expressions, one per receiver:
//   layer 1:        I(X;Y1|U2)      - I(X;Z|U2)       (unconditioned when K = 1)
//   layer 1<k<K:    I(Uk;Yk|Uk+1)   - I(Uk;Z|Uk+1)
//   layer K:        I(UK;YK)        - I(UK;Z)
// Physical degradation makes each of these nonnegative up to float noise.
std::vector<double> rate_expressions(const ChainDistribution& chain,
                                     const DegradedBcSpec& spec);

RateTuple rate_tuple(const ChainDistribution& chain, const DegradedBcSpec& spec);

RandomizationRates randomization_rates(const ChainDistribution& chain,
                                       const DegradedBcSpec& spec, double tau);

// Superposition decodability check per layer: R_k + R'_k against the layer's
// channel rate (I(X;Y1|U2) for layer 1, I(Uk;Yk|Uk+1) in the middle,
// I(UK;YK) on top). margin = rhs - (R + R'), ok when margin >= -1e-9.
struct LayerCheck {
  int layer;
  double lhs;
  double rhs;
  double margin;
  bool ok;
};
std::vector<LayerCheck> check_code_rates(const ChainDistribution& chain,
                                         const DegradedBcSpec& spec,
                                         const RateTuple& rates,
                                         const RandomizationRates& rand_rates);

// Code-rate plan for finite-blocklength experiments: per layer the total
// rate R_k + R'_k is scale times the layer bound, with R'_k taken from the
// wiretapper information minus tau (clamped to fit under the total).
std::pair<RateTuple, RandomizationRates> plan_code_rates(
    const ChainDistribution& chain, const DegradedBcSpec& spec, double scale,
    double tau);

struct OptimizerOptions {
  // |U_2| ... |U_K|; empty means |X| for every auxiliary.
  std::vector<int> cardinalities;
  int restarts = 16;
  int max_iterations = 80;
  double tolerance = 1e-9;
  // Exhaustive simplex grid, binary alphabets only.
  double grid_step = 1.0 / 16;
  enum class Method { CoordinateAscent, Grid };
  Method method = Method::CoordinateAscent;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RegionSample {
  std::vector<double> weights;
  RateTuple rates;
  ChainDistribution chain;
  double value = 0.0;
};

// Maximizes sum_k weights[k] * R_k over chains. Multi-start randomized
// coordinate ascent over the simplex rows (or exhaustive grid when
// requested). Deterministic under a fixed seed: restart substreams are
// derived by counter so the result is independent of thread scheduling, and
// growing `restarts` can only improve the reported value.
RegionSample maximize_weighted_sum(const DegradedBcSpec& spec,
                                   std::span<const double> weights,
                                   const OptimizerOptions& options);

// One RegionSample per weight vector, in input order.
std::vector<RegionSample> trace_boundary(
    const DegradedBcSpec& spec, const std::vector<std::vector<double>>& weight_grid,
    const OptimizerOptions& options);

}  // namespace secbc

#endif
