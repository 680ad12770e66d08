#include "secbc/codebook.hpp"

#include <cmath>
#include <string>

#include "secbc/errors.hpp"

namespace secbc {

namespace {

constexpr std::uint64_t kBookTag = 0x626f6f6b;      // codebook domain
constexpr std::uint64_t kCodewordTag = 0x636f6465;  // codeword symbols

long long ceil_exp2(double bits) {
  if (bits <= 0.0) return 1;
  const double raw = std::exp2(bits);
  if (!(raw < 9.0e18)) throw BudgetError("code size 2^" + std::to_string(bits) +
                                         " overflows the index range");
  // absorb float noise so that integral exponents stay exact
  const double c = std::ceil(raw - 1e-9);
  return c < 1.0 ? 1 : static_cast<long long>(c);
}

}  // namespace

CodeParams make_code_params(int n, RateTuple rates, RandomizationRates rand_rates,
                            std::uint64_t seed, std::uint64_t budget_cap) {
  if (n < 1) throw ValidationError("blocklength must be at least 1");
  const std::size_t k = rates.rates.size();
  if (k == 0 || rand_rates.rates.size() != k)
    throw ValidationError("rate tuples must list every layer");
  CodeParams p;
  p.n = n;
  p.rates = std::move(rates);
  p.rand_rates = std::move(rand_rates);
  p.seed = seed;
  p.budget_cap = budget_cap;

  unsigned long long total_symbols = 0;
  long long worst_product = 0;
  int worst_layer = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = p.rates.rates[i];
    const double rp = p.rand_rates.rates[i];
    if (!(r >= 0.0) || !(rp >= 0.0))
      throw ValidationError("rates must be nonnegative");
    const long long l = ceil_exp2(n * r);
    const long long lp = ceil_exp2(n * rp);
    if (l > (1LL << 62) / lp)
      throw BudgetError("layer " + std::to_string(i + 1) + " codeword count overflows");
    const long long nk = l * lp;
    p.message_counts.push_back(l);
    p.subcode_sizes.push_back(lp);
    p.codeword_counts.push_back(nk);
    const long long product = nk * n;
    total_symbols += static_cast<unsigned long long>(product);
    if (product > worst_product) {
      worst_product = product;
      worst_layer = static_cast<int>(i) + 1;
    }
  }
  if (total_symbols > budget_cap)
    throw BudgetError("codebook symbol budget exceeded: sum_k N_k*n = " +
                      std::to_string(total_symbols) + " > cap " +
                      std::to_string(budget_cap) + " (worst layer " +
                      std::to_string(worst_layer) + " with N_k*n = " +
                      std::to_string(worst_product) + ")");
  return p;
}

CodebookHierarchy::CodebookHierarchy(ChainDistribution chain, CodeParams params,
                                     std::uint64_t codebook_id)
    : chain_(std::move(chain)),
      params_(std::move(params)),
      codebook_id_(codebook_id),
      root_(SplitRng(params_.seed).fork(kBookTag).fork(codebook_id)) {
  if (params_.layers() != chain_.k_receivers())
    throw ValidationError("code params list " + std::to_string(params_.layers()) +
                          " layers but the chain has " +
                          std::to_string(chain_.k_receivers()));
}

SplitRng CodebookHierarchy::layer_stream(int layer,
                                         std::span<const long long> path) const {
  SplitRng s = root_.fork(kCodewordTag).fork(static_cast<std::uint64_t>(layer));
  for (long long idx : path) s = s.fork(static_cast<std::uint64_t>(idx));
  return s;
}

std::vector<int> CodebookHierarchy::codeword(int layer,
                                             std::span<const long long> path) const {
  std::vector<int> out(static_cast<std::size_t>(params_.n));
  codeword_into(layer, path, out);
  return out;
}

void CodebookHierarchy::codeword_into(int layer, std::span<const long long> path,
                                      std::span<int> out) const {
  const int k = layers();
  if (layer < 1 || layer > k) throw ValidationError("layer out of range");
  if (path.size() != static_cast<std::size_t>(k - layer + 1))
    throw ValidationError("path for layer " + std::to_string(layer) + " needs " +
                          std::to_string(k - layer + 1) + " indices, got " +
                          std::to_string(path.size()));
  if (out.size() != static_cast<std::size_t>(params_.n))
    throw ValidationError("output span has the wrong length");
  for (int j = k; j >= layer; --j) {
    const long long idx = path[static_cast<std::size_t>(k - j)];
    if (idx < 0 || idx >= params_.codeword_counts[static_cast<std::size_t>(j) - 1])
      throw ValidationError("codeword index out of range at layer " + std::to_string(j));
  }

  const int n = params_.n;
  // walk the chain top-down; out holds the parent symbols between levels
  for (int j = k; j >= layer; --j) {
    SplitRng s = layer_stream(j, path.first(static_cast<std::size_t>(k - j + 1)));
    const DiscreteChannel& stage = chain_.stage(k - j);
    for (int i = 0; i < n; ++i) {
      const int parent = (j == k) ? 0 : out[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = s.next_categorical(stage.row(parent));
    }
  }
}

std::pair<long long, long long> CodebookHierarchy::split_index(int layer,
                                                               long long combined) const {
  const long long lp = params_.subcode_sizes[static_cast<std::size_t>(layer) - 1];
  const long long nk = params_.codeword_counts[static_cast<std::size_t>(layer) - 1];
  if (combined < 0 || combined >= nk)
    throw ValidationError("combined index out of range");
  return {combined / lp, combined % lp};
}

long long CodebookHierarchy::combined_index(int layer, long long message,
                                            long long secret) const {
  const long long l = params_.message_counts[static_cast<std::size_t>(layer) - 1];
  const long long lp = params_.subcode_sizes[static_cast<std::size_t>(layer) - 1];
  if (message < 0 || message >= l) throw ValidationError("message index out of range");
  if (secret < 0 || secret >= lp) throw ValidationError("secret index out of range");
  return message * lp + secret;
}

}  // namespace secbc
