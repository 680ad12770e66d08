#ifndef SECBC_SIMULATE_HPP
#define SECBC_SIMULATE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "secbc/codebook.hpp"

namespace secbc {

// One encode/transmit pass through the broadcast channel.
struct TransmissionRecord {
  std::vector<long long> messages;  // w_k per layer, index layer-1, 0-based
  std::vector<long long> secrets;   // w'_k per layer
  std::vector<int> x;
  std::vector<std::vector<int>> y;  // y[k-1] is receiver k's sequence
  std::vector<int> z;
};

// Superposition encoding: per layer the secret index is drawn uniformly from
// the message's subcode (top layer first), then x is the bottom codeword.
TransmissionRecord encode(const CodebookHierarchy& book,
                          std::span<const long long> messages, SplitRng& rng);

// Memoryless transmission through the degradation cascade, stage-major:
// y1 from x, then each later output from the previous one, z last.
void transmit(TransmissionRecord& record, const DegradedBcSpec& spec, SplitRng& rng);

struct DecodeResult {
  bool failed = false;
  // Estimated messages (w_layer, ..., w_K) when !failed.
  std::vector<long long> messages;
};

// Maximum-likelihood decoder for receiver `layer`. The candidate set is
// every index stack (w''_K, ..., w''_layer); the likelihood of y is the
// per-symbol product under the induced single-letter law U_layer -> Y_layer
// (the stack determines the input law, nothing is marginalized over other
// stacks). Exact ties or all-zero likelihoods declare a decode failure.
//
// Candidate codewords are materialized once per (codebook, layer), so
// construct the decoder outside trial loops.
class MlDecoder {
 public:
  MlDecoder(const CodebookHierarchy& book, const DegradedBcSpec& spec, int layer);
  DecodeResult decode(std::span<const int> y) const;
  int layer() const { return layer_; }

 private:
  const CodebookHierarchy* book_;
  int layer_;
  int n_;
  long long candidates_;
  std::vector<int> codewords_;        // candidates_ x n_
  std::vector<long long> strides_;    // mixed-radix index -> path digits
  std::vector<double> log_like_;      // [u][y] natural log
  int u_card_;
  int y_card_;
};

DecodeResult decode_ml(std::span<const int> y, const CodebookHierarchy& book,
                       const DegradedBcSpec& spec, int layer);

// Weak-typicality decoder: accepts the unique stack whose codewords are
// jointly epsilon-typical with y under the induced single-letter law
// (every subset of the stack variables and Y must have empirical
// log-probability within epsilon of its entropy). Zero or multiple hits
// fail, mirroring the standard decode rule.
class TypicalDecoder {
 public:
  TypicalDecoder(const CodebookHierarchy& book, const DegradedBcSpec& spec, int layer,
                 double epsilon);
  DecodeResult decode(std::span<const int> y) const;

 private:
  const CodebookHierarchy* book_;
  int layer_;
  int n_;
  double epsilon_;
  long long candidates_;
  std::vector<int> codewords_;  // candidates_ x (vars-1) x n, variable-major
  int var_count_;               // stack variables + Y
  std::vector<int> var_cards_;
  // one entry per nonempty variable subset
  struct SubsetLaw {
    std::vector<int> vars;
    std::vector<std::size_t> strides;
    std::vector<double> log2_mass;
    double entropy_bits;
  };
  std::vector<SubsetLaw> subsets_;
};

DecodeResult decode_typical(std::span<const int> y, const CodebookHierarchy& book,
                            const DegradedBcSpec& spec, int layer, double epsilon);

enum class DecoderKind { MaximumLikelihood, Typicality };

struct SimResult {
  long long trials_per_codebook = 0;
  int codebooks = 0;
  std::vector<long long> error_counts;                    // per receiver, pooled
  std::vector<double> error_rates;                        // P_e(k)
  std::vector<double> half_widths;                        // 95% normal approx
  std::vector<std::vector<long long>> codebook_errors;    // [codebook][receiver]
};

// Random-coding average over `codebooks` independent codebooks and `trials`
// uniform message draws each: encode, transmit, decode at every receiver;
// a trial counts as an error for receiver k when decoding fails or the
// estimated w_k differs. Deterministic function of the master seed.
SimResult estimate_error_prob(const DegradedBcSpec& spec, const ChainDistribution& chain,
                              const CodeParams& params, long long trials, int codebooks,
                              DecoderKind decoder = DecoderKind::MaximumLikelihood,
                              double epsilon = 0.1);

}  // namespace secbc

#endif
