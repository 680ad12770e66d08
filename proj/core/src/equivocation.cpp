#include "secbc/equivocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "secbc/errors.hpp"

namespace secbc {

namespace {

constexpr std::uint64_t kZSampleTag = 0x7a73616d;

double safe_log(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

void check_subset(const MessageSubset& s, int k) {
  switch (s.kind) {
    case MessageSubset::Kind::Single:
      if (s.k < 1 || s.k > k) throw ValidationError("subset receiver out of range");
      return;
    case MessageSubset::Kind::AdjacentPair:
      if (k < 2 || s.k < 1 || s.k + 1 > k)
        throw ValidationError("adjacent pair (" + std::to_string(s.k) + "," +
                              std::to_string(s.k + 1) + ") out of range");
      return;
    case MessageSubset::Kind::Full:
      return;
  }
  throw ValidationError("unsupported subset shape");
}

// Every full index path (one combined index per layer), its bottom codeword,
// and the message-group id it belongs to for a given subset.
struct PathEnsemble {
  long long path_count = 1;
  long long group_count = 1;
  int n = 0;
  std::vector<int> x;            // path_count * n
  std::vector<long long> group;  // per path

  PathEnsemble(const CodebookHierarchy& book, const MessageSubset& subset) {
    const CodeParams& params = book.params();
    const int k = book.layers();
    n = params.n;
    for (long long nk : params.codeword_counts) {
      if (path_count > (1LL << 62) / nk) throw BudgetError("path count overflows");
      path_count *= nk;
    }
    switch (subset.kind) {
      case MessageSubset::Kind::Single:
        group_count = params.message_counts[static_cast<std::size_t>(subset.k) - 1];
        break;
      case MessageSubset::Kind::AdjacentPair:
        group_count = params.message_counts[static_cast<std::size_t>(subset.k) - 1] *
                      params.message_counts[static_cast<std::size_t>(subset.k)];
        break;
      case MessageSubset::Kind::Full:
        group_count = 1;
        for (long long l : params.message_counts) group_count *= l;
        break;
    }

    x.resize(static_cast<std::size_t>(path_count) * n);
    group.resize(static_cast<std::size_t>(path_count));
    // path digits top-down: digit 0 = layer K, digit k-1 = layer 1
    std::vector<long long> digits(static_cast<std::size_t>(k), 0);
    for (long long p = 0; p < path_count; ++p) {
      book.codeword_into(1, digits,
                         {x.data() + static_cast<std::size_t>(p) * n,
                          static_cast<std::size_t>(n)});
      long long g = 0;
      switch (subset.kind) {
        case MessageSubset::Kind::Single:
          g = book.split_index(subset.k,
                               digits[static_cast<std::size_t>(k - subset.k)])
                  .first;
          break;
        case MessageSubset::Kind::AdjacentPair: {
          const long long w_low =
              book.split_index(subset.k, digits[static_cast<std::size_t>(k - subset.k)])
                  .first;
          const long long w_high =
              book.split_index(subset.k + 1,
                               digits[static_cast<std::size_t>(k - subset.k - 1)])
                  .first;
          g = w_low * params.message_counts[static_cast<std::size_t>(subset.k)] + w_high;
          break;
        }
        case MessageSubset::Kind::Full: {
          for (int layer = k; layer >= 1; --layer) {
            const long long w =
                book.split_index(layer, digits[static_cast<std::size_t>(k - layer)])
                    .first;
            g = g * params.message_counts[static_cast<std::size_t>(layer) - 1] + w;
          }
          break;
        }
      }
      group[static_cast<std::size_t>(p)] = g;

      // odometer over combined indices, bottom layer fastest
      for (int d = k - 1; d >= 0; --d) {
        const long long radix = params.codeword_counts[static_cast<std::size_t>(k - 1 - d)];
        if (++digits[static_cast<std::size_t>(d)] < radix) break;
        digits[static_cast<std::size_t>(d)] = 0;
      }
    }
  }
};

// Posterior entropy H(W_S | Z = z) in bits plus the codebook-conditional
// log-probability of z, by a scan over all paths (log domain, max shift).
struct PerZResult {
  double entropy_bits;
  double log_prob;  // natural log of p(z), -inf when unreachable
};

class PosteriorScanner {
 public:
  PosteriorScanner(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                   const MessageSubset& subset)
      : ensemble_(book, subset), wiretap_(wiretap_channel(spec)) {
    log_w_.resize(static_cast<std::size_t>(wiretap_.input_size()) *
                  wiretap_.output_size());
    for (int u = 0; u < wiretap_.input_size(); ++u)
      for (int z = 0; z < wiretap_.output_size(); ++z)
        log_w_[static_cast<std::size_t>(u) * wiretap_.output_size() + z] =
            safe_log(wiretap_(u, z));
    scratch_.resize(static_cast<std::size_t>(ensemble_.path_count));
    group_mass_.resize(static_cast<std::size_t>(ensemble_.group_count));
  }

  const PathEnsemble& ensemble() const { return ensemble_; }
  int z_card() const { return wiretap_.output_size(); }

  PerZResult evaluate(std::span<const int> z) {
    const int n = ensemble_.n;
    const int zc = wiretap_.output_size();
    double max_lp = -std::numeric_limits<double>::infinity();
    for (long long p = 0; p < ensemble_.path_count; ++p) {
      const int* xs = ensemble_.x.data() + static_cast<std::size_t>(p) * n;
      double lp = 0.0;
      for (int i = 0; i < n; ++i)
        lp += log_w_[static_cast<std::size_t>(xs[i]) * zc +
                     static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
      scratch_[static_cast<std::size_t>(p)] = lp;
      if (lp > max_lp) max_lp = lp;
    }
    if (max_lp == -std::numeric_limits<double>::infinity())
      return {0.0, -std::numeric_limits<double>::infinity()};

    std::fill(group_mass_.begin(), group_mass_.end(), 0.0);
    double total = 0.0;
    for (long long p = 0; p < ensemble_.path_count; ++p) {
      const double m = std::exp(scratch_[static_cast<std::size_t>(p)] - max_lp);
      group_mass_[static_cast<std::size_t>(ensemble_.group[static_cast<std::size_t>(p)])] += m;
      total += m;
    }
    double h = 0.0;
    for (double gm : group_mass_) {
      if (gm > 0.0) {
        const double q = gm / total;
        h -= q * std::log2(q);
      }
    }
    // p(z) = exp(max_lp) * total / path_count
    const double log_prob =
        max_lp + std::log(total) - std::log(static_cast<double>(ensemble_.path_count));
    return {h, log_prob};
  }

 private:
  PathEnsemble ensemble_;
  DiscreteChannel wiretap_;
  std::vector<double> log_w_;
  std::vector<double> scratch_;
  std::vector<double> group_mass_;
};

}  // namespace

std::string MessageSubset::name(int k_receivers) const {
  switch (kind) {
    case Kind::Single:
      return std::to_string(k);
    case Kind::AdjacentPair:
      return std::to_string(k) + "," + std::to_string(k + 1);
    case Kind::Full: {
      std::string out;
      for (int i = 1; i <= k_receivers; ++i) {
        if (i > 1) out += ",";
        out += std::to_string(i);
      }
      return out;
    }
  }
  return "?";
}

double exact_equivocation(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                          const MessageSubset& subset, std::uint64_t enum_budget) {
  check_subset(subset, book.layers());
  PosteriorScanner scanner(book, spec, subset);
  const int n = book.blocklength();
  const int zc = scanner.z_card();

  // |Z|^n z-sequences, each scanned against every path
  unsigned long long z_total = 1;
  for (int i = 0; i < n; ++i) {
    if (z_total > enum_budget) break;
    z_total *= static_cast<unsigned long long>(zc);
  }
  const unsigned long long work =
      z_total * static_cast<unsigned long long>(scanner.ensemble().path_count);
  if (z_total > enum_budget || work > enum_budget)
    throw BudgetError("exact equivocation needs |Z|^n * paths = " +
                      std::to_string(work) + " > budget " +
                      std::to_string(enum_budget));

  std::vector<int> z(static_cast<std::size_t>(n), 0);
  double h_bits = 0.0;
  double prob_sum = 0.0;
  for (unsigned long long step = 0; step < z_total; ++step) {
    const PerZResult r = scanner.evaluate(z);
    if (r.log_prob != -std::numeric_limits<double>::infinity()) {
      const double pz = std::exp(r.log_prob);
      h_bits += pz * r.entropy_bits;
      prob_sum += pz;
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++z[static_cast<std::size_t>(i)] < zc) break;
      z[static_cast<std::size_t>(i)] = 0;
    }
  }
  if (std::abs(prob_sum - 1.0) > 1e-6)
    throw NumericError("wiretap output probabilities sum to " +
                       std::to_string(prob_sum) + ", expected 1");
  const double rate = h_bits / static_cast<double>(n);
  return rate < 0.0 ? 0.0 : rate;
}

McEstimate mc_equivocation(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                           const MessageSubset& subset, long long samples,
                           SplitRng rng, std::uint64_t enum_budget) {
  check_subset(subset, book.layers());
  if (samples < 1) throw ValidationError("need at least one sample");
  PosteriorScanner scanner(book, spec, subset);
  const PathEnsemble& ens = scanner.ensemble();
  if (static_cast<unsigned long long>(ens.path_count) *
          static_cast<unsigned long long>(ens.n) >
      enum_budget)
    throw BudgetError("per-sample posterior scan exceeds the budget");

  const DiscreteChannel wz = wiretap_channel(spec);
  const int n = ens.n;
  SplitRng root = rng.fork(kZSampleTag);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<int> z(static_cast<std::size_t>(n));
  for (long long t = 0; t < samples; ++t) {
    SplitRng s = root.fork(static_cast<std::uint64_t>(t));
    // uniform messages and secrets make the full path uniform
    const long long path = s.next_index(ens.path_count);
    const int* xs = ens.x.data() + static_cast<std::size_t>(path) * n;
    for (int i = 0; i < n; ++i)
      z[static_cast<std::size_t>(i)] = s.next_categorical(wz.row(xs[i]));
    const double h = scanner.evaluate(z).entropy_bits;
    sum += h;
    sum_sq += h * h;
  }
  McEstimate est;
  est.samples = samples;
  const double mean = sum / static_cast<double>(samples);
  est.value = mean / static_cast<double>(n);
  if (samples < 2) {
    est.std_error = std::numeric_limits<double>::infinity();
  } else {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(samples) * mean * mean) /
                          static_cast<double>(samples - 1));
    est.std_error = std::sqrt(var / static_cast<double>(samples)) /
                    static_cast<double>(n);
  }
  return est;
}

WiretapDecodeStats wiretapper_subcode_error(const CodebookHierarchy& book,
                                            const DegradedBcSpec& spec, int layer,
                                            long long trials, SplitRng rng) {
  const int k = book.layers();
  if (layer < 1 || layer > k) throw ValidationError("layer out of range");
  if (trials < 1) throw ValidationError("need at least one trial");
  const CodeParams& params = book.params();
  const long long l = params.message_counts[static_cast<std::size_t>(layer) - 1];
  const long long lp = params.subcode_sizes[static_cast<std::size_t>(layer) - 1];

  const DiscreteChannel law =
      compose(chain_to_input(book.chain(), layer), wiretap_channel(spec));
  const int zc = law.output_size();
  std::vector<double> log_law(static_cast<std::size_t>(law.input_size()) * zc);
  for (int u = 0; u < law.input_size(); ++u)
    for (int z = 0; z < zc; ++z)
      log_law[static_cast<std::size_t>(u) * zc + z] = safe_log(law(u, z));

  const DiscreteChannel wz = wiretap_channel(spec);
  const int n = params.n;
  std::vector<long long> errors(static_cast<std::size_t>(l), 0);
  std::vector<long long> visits(static_cast<std::size_t>(l), 0);
  long long total_errors = 0;

  std::vector<long long> path(static_cast<std::size_t>(k));
  std::vector<int> z(static_cast<std::size_t>(n));
  std::vector<int> candidate(static_cast<std::size_t>(n));
  const std::size_t prefix_len = static_cast<std::size_t>(k - layer + 1);

  for (long long t = 0; t < trials; ++t) {
    SplitRng s = rng.fork(static_cast<std::uint64_t>(t));
    // true transmission: every layer's message and secret uniform
    for (int j = k; j >= 1; --j) {
      const long long nk = params.codeword_counts[static_cast<std::size_t>(j) - 1];
      path[static_cast<std::size_t>(k - j)] = s.next_index(nk);
    }
    const auto [w_true, secret_true] =
        book.split_index(layer, path[static_cast<std::size_t>(k - layer)]);
    const std::vector<int> x = book.codeword(1, path);
    for (int i = 0; i < n; ++i)
      z[static_cast<std::size_t>(i)] =
          s.next_categorical(wz.row(x[static_cast<std::size_t>(i)]));

    // genie-aided scan of the true message's subcode
    double best = -std::numeric_limits<double>::infinity();
    long long best_secret = 0;
    for (long long cand = 0; cand < lp; ++cand) {
      path[static_cast<std::size_t>(k - layer)] = book.combined_index(layer, w_true, cand);
      book.codeword_into(layer, std::span<const long long>(path.data(), prefix_len),
                         candidate);
      double ll = 0.0;
      for (int i = 0; i < n; ++i)
        ll += log_law[static_cast<std::size_t>(candidate[static_cast<std::size_t>(i)]) * zc +
                      static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
      if (ll > best) {
        best = ll;
        best_secret = cand;
      }
    }
    ++visits[static_cast<std::size_t>(w_true)];
    if (best_secret != secret_true) {
      ++errors[static_cast<std::size_t>(w_true)];
      ++total_errors;
    }
  }

  WiretapDecodeStats stats;
  stats.layer = layer;
  stats.trials = trials;
  stats.average_error = static_cast<double>(total_errors) / static_cast<double>(trials);
  stats.subcode_errors.resize(static_cast<std::size_t>(l), 0.0);
  stats.weights.resize(static_cast<std::size_t>(l), 0.0);
  for (long long i = 0; i < l; ++i) {
    const long long v = visits[static_cast<std::size_t>(i)];
    stats.weights[static_cast<std::size_t>(i)] =
        static_cast<double>(v) / static_cast<double>(trials);
    stats.subcode_errors[static_cast<std::size_t>(i)] =
        v > 0 ? static_cast<double>(errors[static_cast<std::size_t>(i)]) /
                    static_cast<double>(v)
              : 0.0;
  }
  return stats;
}

EquivocationReport leakage_report(const CodeParams& params,
                                  const EquivocationInputs& inputs, double tolerance) {
  const int k = params.layers();
  if (inputs.single.size() != static_cast<std::size_t>(k))
    throw ValidationError("need one single-receiver equivocation slot per receiver");
  if (!inputs.pair.empty() && inputs.pair.size() != static_cast<std::size_t>(k - 1))
    throw ValidationError("adjacent-pair slots must number K-1");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be nonnegative");

  EquivocationReport rep;
  rep.method = inputs.method;
  rep.samples = inputs.samples;
  rep.tolerance = tolerance;
  rep.single_se = inputs.single_se;
  rep.pair_se = inputs.pair_se;
  rep.sum_se = inputs.sum_se;

  for (int layer = 1; layer <= k; ++layer)
    rep.reference_rates.push_back(
        std::log2(static_cast<double>(
            params.message_counts[static_cast<std::size_t>(layer) - 1])) /
        static_cast<double>(params.n));

  rep.single = inputs.single;
  for (int i = 0; i < k; ++i) {
    const double re = inputs.single[static_cast<std::size_t>(i)];
    if (std::isnan(re)) {
      rep.single_gap.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.single_ok.push_back(true);
      continue;
    }
    const double gap = std::max(0.0, rep.reference_rates[static_cast<std::size_t>(i)] - re);
    rep.single_gap.push_back(gap);
    rep.single_ok.push_back(gap <= tolerance);
  }

  rep.pair = inputs.pair;
  for (std::size_t i = 0; i < rep.pair.size(); ++i) {
    const double re = rep.pair[i];
    if (std::isnan(re)) {
      rep.pair_gap.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.pair_ok.push_back(true);
      continue;
    }
    const double ref = rep.reference_rates[i] + rep.reference_rates[i + 1];
    const double gap = std::max(0.0, ref - re);
    rep.pair_gap.push_back(gap);
    rep.pair_ok.push_back(gap <= tolerance);
  }

  if (!std::isnan(inputs.sum)) {
    rep.sum = inputs.sum;
    rep.sum_set = true;
    double ref = 0.0;
    for (double r : rep.reference_rates) ref += r;
    rep.sum_gap = std::max(0.0, ref - inputs.sum);
    rep.sum_ok = rep.sum_gap <= tolerance;
  }
  return rep;
}

}  // namespace secbc
