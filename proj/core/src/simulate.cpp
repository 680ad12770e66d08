#include "secbc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "secbc/errors.hpp"

namespace secbc {

namespace {

constexpr std::uint64_t kTrialTag = 0x747269616c;  // per-trial substreams
constexpr std::uint64_t kMsgTag = 1;
constexpr std::uint64_t kEncTag = 2;
constexpr std::uint64_t kChanTag = 3;

double safe_log(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

// Mixed-radix enumeration of index stacks (w''_K, ..., w''_layer):
// digit 0 is the top layer, the last digit (own layer) varies fastest.
struct StackEnumeration {
  long long count = 1;
  std::vector<long long> radix;    // per digit
  std::vector<long long> strides;  // candidate id -> digit

  StackEnumeration(const CodeParams& params, int layer) {
    const int k = params.layers();
    for (int j = k; j >= layer; --j)
      radix.push_back(params.codeword_counts[static_cast<std::size_t>(j) - 1]);
    strides.assign(radix.size(), 1);
    for (int i = static_cast<int>(radix.size()) - 2; i >= 0; --i)
      strides[static_cast<std::size_t>(i)] =
          strides[static_cast<std::size_t>(i) + 1] * radix[static_cast<std::size_t>(i) + 1];
    for (long long r : radix) {
      if (count > (1LL << 62) / r)
        throw BudgetError("candidate stack count overflows");
      count *= r;
    }
  }

  void digits(long long candidate, std::span<long long> out) const {
    for (std::size_t i = 0; i < strides.size(); ++i) {
      out[i] = candidate / strides[i];
      candidate %= strides[i];
    }
  }
};

}  // namespace

TransmissionRecord encode(const CodebookHierarchy& book,
                          std::span<const long long> messages, SplitRng& rng) {
  const int k = book.layers();
  const CodeParams& params = book.params();
  if (messages.size() != static_cast<std::size_t>(k))
    throw ValidationError("need one message per layer");
  for (int layer = 1; layer <= k; ++layer) {
    const long long w = messages[static_cast<std::size_t>(layer) - 1];
    if (w < 0 || w >= params.message_counts[static_cast<std::size_t>(layer) - 1])
      throw ValidationError("message for layer " + std::to_string(layer) +
                            " out of range");
  }

  TransmissionRecord rec;
  rec.messages.assign(messages.begin(), messages.end());
  rec.secrets.resize(static_cast<std::size_t>(k));
  std::vector<long long> path(static_cast<std::size_t>(k));
  // top layer first, matching the path convention
  for (int layer = k; layer >= 1; --layer) {
    const long long lp = params.subcode_sizes[static_cast<std::size_t>(layer) - 1];
    const long long secret = rng.next_index(lp);
    rec.secrets[static_cast<std::size_t>(layer) - 1] = secret;
    path[static_cast<std::size_t>(k - layer)] =
        book.combined_index(layer, rec.messages[static_cast<std::size_t>(layer) - 1],
                            secret);
  }
  rec.x = book.codeword(1, path);
  return rec;
}

void transmit(TransmissionRecord& record, const DegradedBcSpec& spec, SplitRng& rng) {
  const int k = spec.k_receivers;
  const int n = static_cast<int>(record.x.size());
  if (n == 0) throw ValidationError("record has no transmitted sequence");
  for (int v : record.x) {
    if (v < 0 || v >= spec.x_alphabet())
      throw ValidationError("transmitted symbol outside the input alphabet");
  }
  record.y.assign(static_cast<std::size_t>(k), {});
  const std::vector<int>* prev = &record.x;
  for (int stage = 0; stage <= k; ++stage) {
    const DiscreteChannel& ch = (stage == 0) ? spec.base
                                             : spec.kernels[static_cast<std::size_t>(stage) - 1];
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] =
          rng.next_categorical(ch.row((*prev)[static_cast<std::size_t>(i)]));
    if (stage < k) {
      record.y[static_cast<std::size_t>(stage)] = std::move(out);
      prev = &record.y[static_cast<std::size_t>(stage)];
    } else {
      record.z = std::move(out);
      prev = &record.z;
    }
  }
}

MlDecoder::MlDecoder(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                     int layer)
    : book_(&book), layer_(layer), n_(book.blocklength()) {
  const int k = book.layers();
  if (layer < 1 || layer > k) throw ValidationError("decoder layer out of range");
  const StackEnumeration stacks(book.params(), layer);
  candidates_ = stacks.count;
  strides_ = stacks.strides;
  if (candidates_ > 0 &&
      static_cast<unsigned long long>(candidates_) * static_cast<unsigned long long>(n_) >
          book.params().budget_cap)
    throw BudgetError("decoder candidate table exceeds the symbol budget");

  const DiscreteChannel law =
      compose(chain_to_input(book.chain(), layer), receiver_channel(spec, layer));
  u_card_ = law.input_size();
  y_card_ = law.output_size();
  log_like_.resize(static_cast<std::size_t>(u_card_) * y_card_);
  for (int u = 0; u < u_card_; ++u)
    for (int y = 0; y < y_card_; ++y)
      log_like_[static_cast<std::size_t>(u) * y_card_ + y] = safe_log(law(u, y));

  codewords_.resize(static_cast<std::size_t>(candidates_) * n_);
  std::vector<long long> digits(stacks.radix.size());
  for (long long c = 0; c < candidates_; ++c) {
    stacks.digits(c, digits);
    book.codeword_into(layer_, digits,
                       {codewords_.data() + static_cast<std::size_t>(c) * n_,
                        static_cast<std::size_t>(n_)});
  }
}

DecodeResult MlDecoder::decode(std::span<const int> y) const {
  if (y.size() != static_cast<std::size_t>(n_))
    throw ValidationError("received sequence has the wrong length");
  for (int v : y) {
    if (v < 0 || v >= y_card_)
      throw ValidationError("received symbol outside the output alphabet");
  }
  double best = -std::numeric_limits<double>::infinity();
  long long best_candidate = -1;
  int best_count = 0;
  for (long long c = 0; c < candidates_; ++c) {
    const int* cw = codewords_.data() + static_cast<std::size_t>(c) * n_;
    double ll = 0.0;
    for (int i = 0; i < n_; ++i)
      ll += log_like_[static_cast<std::size_t>(cw[i]) * y_card_ + y[static_cast<std::size_t>(i)]];
    if (ll > best) {
      best = ll;
      best_candidate = c;
      best_count = 1;
    } else if (ll == best) {
      ++best_count;
    }
  }
  if (best_candidate < 0 || best_count != 1 ||
      best == -std::numeric_limits<double>::infinity())
    return {true, {}};

  const int k = book_->layers();
  std::vector<long long> digits(strides_.size());
  for (std::size_t i = 0; i < strides_.size(); ++i) {
    digits[i] = best_candidate / strides_[i];
    best_candidate %= strides_[i];
  }
  DecodeResult res;
  // digits are top-down (layer K first); report (w_layer, ..., w_K)
  for (int j = layer_; j <= k; ++j) {
    const long long combined = digits[static_cast<std::size_t>(k - j)];
    res.messages.push_back(book_->split_index(j, combined).first);
  }
  return res;
}

DecodeResult decode_ml(std::span<const int> y, const CodebookHierarchy& book,
                       const DegradedBcSpec& spec, int layer) {
  return MlDecoder(book, spec, layer).decode(y);
}

TypicalDecoder::TypicalDecoder(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                               int layer, double epsilon)
    : book_(&book), layer_(layer), n_(book.blocklength()), epsilon_(epsilon) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  const int k = book.layers();
  if (layer < 1 || layer > k) throw ValidationError("decoder layer out of range");
  const ChainDistribution& chain = book.chain();

  const StackEnumeration stacks(book.params(), layer);
  candidates_ = stacks.count;
  const int stack_vars = k - layer + 1;
  var_count_ = stack_vars + 1;  // plus Y
  if (candidates_ > 0 && static_cast<unsigned long long>(candidates_) *
                                 static_cast<unsigned long long>(stack_vars) *
                                 static_cast<unsigned long long>(n_) >
                             book.params().budget_cap)
    throw BudgetError("decoder candidate table exceeds the symbol budget");

  // variable v < stack_vars is U_{K-v} (top-down); last variable is Y_layer
  for (int v = 0; v < stack_vars; ++v)
    var_cards_.push_back(chain.variable_cardinality(v));
  const DiscreteChannel law =
      compose(chain_to_input(chain, layer), receiver_channel(spec, layer));
  var_cards_.push_back(law.output_size());

  // single-letter joint over (U_K, ..., U_layer, Y)
  std::size_t total = 1;
  for (int c : var_cards_) total *= static_cast<std::size_t>(c);
  std::vector<double> joint(total);
  std::vector<int> idx(static_cast<std::size_t>(var_count_), 0);
  for (std::size_t off = 0; off < total; ++off) {
    double p = 1.0;
    for (int v = 0; v < stack_vars; ++v) {
      const int in = (v == 0) ? 0 : idx[static_cast<std::size_t>(v) - 1];
      p *= chain.stage(v)(in, idx[static_cast<std::size_t>(v)]);
    }
    p *= law(idx[static_cast<std::size_t>(stack_vars) - 1],
             idx[static_cast<std::size_t>(stack_vars)]);
    joint[off] = p;
    for (int v = var_count_ - 1; v >= 0; --v) {
      if (++idx[static_cast<std::size_t>(v)] < var_cards_[static_cast<std::size_t>(v)])
        break;
      idx[static_cast<std::size_t>(v)] = 0;
    }
  }

  std::vector<std::size_t> full_strides(static_cast<std::size_t>(var_count_), 1);
  for (int v = var_count_ - 2; v >= 0; --v)
    full_strides[static_cast<std::size_t>(v)] =
        full_strides[static_cast<std::size_t>(v) + 1] *
        static_cast<std::size_t>(var_cards_[static_cast<std::size_t>(v) + 1]);

  // every nonempty subset of the variables gets its own marginal law
  for (unsigned mask = 1; mask < (1u << var_count_); ++mask) {
    SubsetLaw s;
    for (int v = 0; v < var_count_; ++v)
      if (mask & (1u << v)) s.vars.push_back(v);
    s.strides.assign(s.vars.size(), 1);
    for (int i = static_cast<int>(s.vars.size()) - 2; i >= 0; --i)
      s.strides[static_cast<std::size_t>(i)] =
          s.strides[static_cast<std::size_t>(i) + 1] *
          static_cast<std::size_t>(
              var_cards_[static_cast<std::size_t>(s.vars[static_cast<std::size_t>(i) + 1])]);
    std::size_t sub_total = 1;
    for (int v : s.vars) sub_total *= static_cast<std::size_t>(var_cards_[static_cast<std::size_t>(v)]);
    std::vector<double> mass(sub_total, 0.0);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t off = 0; off < total; ++off) {
      std::size_t sub = 0;
      for (std::size_t i = 0; i < s.vars.size(); ++i)
        sub += s.strides[i] *
               static_cast<std::size_t>(idx[static_cast<std::size_t>(s.vars[i])]);
      mass[sub] += joint[off];
      for (int v = var_count_ - 1; v >= 0; --v) {
        if (++idx[static_cast<std::size_t>(v)] < var_cards_[static_cast<std::size_t>(v)])
          break;
        idx[static_cast<std::size_t>(v)] = 0;
      }
    }
    s.entropy_bits = 0.0;
    s.log2_mass.resize(sub_total);
    for (std::size_t i = 0; i < sub_total; ++i) {
      if (mass[i] > 0.0) s.entropy_bits -= mass[i] * std::log2(mass[i]);
      s.log2_mass[i] = mass[i] > 0.0 ? std::log2(mass[i])
                                     : -std::numeric_limits<double>::infinity();
    }
    subsets_.push_back(std::move(s));
  }

  // candidate codeword stacks, variable-major within each candidate
  const int per_candidate = stack_vars;
  codewords_.resize(static_cast<std::size_t>(candidates_) * per_candidate * n_);
  std::vector<long long> digits(stacks.radix.size());
  for (long long c = 0; c < candidates_; ++c) {
    stacks.digits(c, digits);
    for (int v = 0; v < stack_vars; ++v) {
      const int j = k - v;  // variable v is U_j (or X when j == 1)
      book.codeword_into(
          j, std::span<const long long>(digits.data(), static_cast<std::size_t>(v + 1)),
          {codewords_.data() +
               (static_cast<std::size_t>(c) * per_candidate + static_cast<std::size_t>(v)) * n_,
           static_cast<std::size_t>(n_)});
    }
  }
}

DecodeResult TypicalDecoder::decode(std::span<const int> y) const {
  if (y.size() != static_cast<std::size_t>(n_))
    throw ValidationError("received sequence has the wrong length");
  const int k = book_->layers();
  const int stack_vars = var_count_ - 1;
  for (int v : y) {
    if (v < 0 || v >= var_cards_.back())
      throw ValidationError("received symbol outside the output alphabet");
  }

  long long hit = -1;
  int hit_count = 0;
  std::vector<int> symbol(static_cast<std::size_t>(var_count_));
  for (long long c = 0; c < candidates_; ++c) {
    bool typical = true;
    for (const SubsetLaw& s : subsets_) {
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) {
        for (int v = 0; v < stack_vars; ++v)
          symbol[static_cast<std::size_t>(v)] = codewords_[
              (static_cast<std::size_t>(c) * stack_vars + static_cast<std::size_t>(v)) * n_ +
              static_cast<std::size_t>(i)];
        symbol[static_cast<std::size_t>(stack_vars)] = y[static_cast<std::size_t>(i)];
        std::size_t sub = 0;
        for (std::size_t t = 0; t < s.vars.size(); ++t)
          sub += s.strides[t] *
                 static_cast<std::size_t>(symbol[static_cast<std::size_t>(s.vars[t])]);
        acc += s.log2_mass[sub];
      }
      const double empirical = -acc / static_cast<double>(n_);
      if (!(std::abs(empirical - s.entropy_bits) <= epsilon_)) {
        typical = false;
        break;
      }
    }
    if (typical) {
      ++hit_count;
      hit = c;
      if (hit_count > 1) break;
    }
  }
  if (hit_count != 1) return {true, {}};

  const StackEnumeration stacks(book_->params(), layer_);
  std::vector<long long> digits(stacks.radix.size());
  stacks.digits(hit, digits);
  DecodeResult res;
  for (int j = layer_; j <= k; ++j)
    res.messages.push_back(
        book_->split_index(j, digits[static_cast<std::size_t>(k - j)]).first);
  return res;
}

DecodeResult decode_typical(std::span<const int> y, const CodebookHierarchy& book,
                            const DegradedBcSpec& spec, int layer, double epsilon) {
  return TypicalDecoder(book, spec, layer, epsilon).decode(y);
}

SimResult estimate_error_prob(const DegradedBcSpec& spec, const ChainDistribution& chain,
                              const CodeParams& params, long long trials, int codebooks,
                              DecoderKind decoder, double epsilon) {
  if (trials < 1) throw ValidationError("need at least one trial");
  if (codebooks < 1) throw ValidationError("need at least one codebook");
  const int k = spec.k_receivers;

  SimResult result;
  result.trials_per_codebook = trials;
  result.codebooks = codebooks;
  result.error_counts.assign(static_cast<std::size_t>(k), 0);
  result.codebook_errors.assign(static_cast<std::size_t>(codebooks),
                                std::vector<long long>(static_cast<std::size_t>(k), 0));

  const SplitRng trial_root = SplitRng(params.seed).fork(kTrialTag);
  for (int m = 0; m < codebooks; ++m) {
    const CodebookHierarchy book(chain, params, static_cast<std::uint64_t>(m));
    std::vector<MlDecoder> ml;
    std::vector<TypicalDecoder> typ;
    for (int layer = 1; layer <= k; ++layer) {
      if (decoder == DecoderKind::MaximumLikelihood)
        ml.emplace_back(book, spec, layer);
      else
        typ.emplace_back(book, spec, layer, epsilon);
    }
    const SplitRng book_root = trial_root.fork(static_cast<std::uint64_t>(m));
    for (long long t = 0; t < trials; ++t) {
      SplitRng trial = book_root.fork(static_cast<std::uint64_t>(t));
      SplitRng msg_rng = trial.fork(kMsgTag);
      std::vector<long long> messages(static_cast<std::size_t>(k));
      for (int layer = 1; layer <= k; ++layer)
        messages[static_cast<std::size_t>(layer) - 1] =
            msg_rng.next_index(params.message_counts[static_cast<std::size_t>(layer) - 1]);
      SplitRng enc_rng = trial.fork(kEncTag);
      TransmissionRecord rec = encode(book, messages, enc_rng);
      SplitRng chan_rng = trial.fork(kChanTag);
      transmit(rec, spec, chan_rng);
      for (int layer = 1; layer <= k; ++layer) {
        const DecodeResult res =
            (decoder == DecoderKind::MaximumLikelihood)
                ? ml[static_cast<std::size_t>(layer) - 1].decode(
                      rec.y[static_cast<std::size_t>(layer) - 1])
                : typ[static_cast<std::size_t>(layer) - 1].decode(
                      rec.y[static_cast<std::size_t>(layer) - 1]);
        const bool error =
            res.failed || res.messages[0] != messages[static_cast<std::size_t>(layer) - 1];
        if (error) {
          ++result.error_counts[static_cast<std::size_t>(layer) - 1];
          ++result.codebook_errors[static_cast<std::size_t>(m)]
                                  [static_cast<std::size_t>(layer) - 1];
        }
      }
    }
  }

  const double total = static_cast<double>(trials) * codebooks;
  for (int layer = 0; layer < k; ++layer) {
    const double p =
        static_cast<double>(result.error_counts[static_cast<std::size_t>(layer)]) / total;
    result.error_rates.push_back(p);
    result.half_widths.push_back(1.96 * std::sqrt(p * (1.0 - p) / total));
  }
  return result;
}

}  // namespace secbc
