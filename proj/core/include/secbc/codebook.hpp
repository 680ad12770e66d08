#ifndef SECBC_CODEBOOK_HPP
#define SECBC_CODEBOOK_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "secbc/chain.hpp"
#include "secbc/region.hpp"
#include "secbc/rng.hpp"

namespace secbc {

// Finite-blocklength code sizing. Layer k carries ceil(2^{n R_k}) messages,
// each hiding inside a subcode of ceil(2^{n R'_k}) codewords, for
// N_k = L_k * L'_k codewords per ancestor combination.
struct CodeParams {
  int n = 0;
  RateTuple rates;
  RandomizationRates rand_rates;
  std::uint64_t seed = 0;
  std::uint64_t budget_cap = std::uint64_t{1} << 24;

  // Derived by make_code_params, indexed by layer-1.
  std::vector<long long> message_counts;   // L_k
  std::vector<long long> subcode_sizes;    // L'_k
  std::vector<long long> codeword_counts;  // N_k

  int layers() const { return static_cast<int>(message_counts.size()); }
};

// Computes the derived counts and enforces the symbol budget
// sum_k N_k * n <= budget_cap (BudgetError names the worst offender).
CodeParams make_code_params(int n, RateTuple rates, RandomizationRates rand_rates,
                            std::uint64_t seed, std::uint64_t budget_cap = std::uint64_t{1}
                                                                           << 24);

// Nested random codebooks of the superposition scheme.
//
// Layer K holds N_K top codewords drawn i.i.d. from p(u_K); layer k < K
// holds N_k codewords per ancestor index combination, drawn symbolwise from
// p(u_k | parent symbol); the bottom layer (layer 1) emits X sequences. Each
// layer is partitioned into L_k subcodes of exactly L'_k codewords by a
// row-major index split: combined = message * L'_k + secret.
//
// Codewords are functions of (seed, codebook_id, layer, index path) through
// counter-based substreams, so the hierarchy needs no storage, regeneration
// is bit-identical, and evaluation order never matters.
class CodebookHierarchy {
 public:
  CodebookHierarchy(ChainDistribution chain, CodeParams params,
                    std::uint64_t codebook_id = 0);

  int layers() const { return chain_.k_receivers(); }
  int blocklength() const { return params_.n; }
  const CodeParams& params() const { return params_; }
  const ChainDistribution& chain() const { return chain_; }
  std::uint64_t codebook_id() const { return codebook_id_; }

  // path = combined indices (w''_K, ..., w''_layer), top first, so its
  // length is layers() - layer + 1.
  std::vector<int> codeword(int layer, std::span<const long long> path) const;
  void codeword_into(int layer, std::span<const long long> path,
                     std::span<int> out) const;

  // combined index <-> (message, secret) within a layer
  std::pair<long long, long long> split_index(int layer, long long combined) const;
  long long combined_index(int layer, long long message, long long secret) const;

 private:
  SplitRng layer_stream(int layer, std::span<const long long> path) const;

  ChainDistribution chain_;
  CodeParams params_;
  std::uint64_t codebook_id_;
  SplitRng root_;
};

}  // namespace secbc

#endif
