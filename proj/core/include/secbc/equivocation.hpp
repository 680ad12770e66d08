#ifndef SECBC_EQUIVOCATION_HPP
#define SECBC_EQUIVOCATION_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "secbc/codebook.hpp"
#include "secbc/simulate.hpp"

namespace secbc {

// Message subsets whose equivocation the coding scheme controls: a single
// receiver, an adjacent pair, or all receivers. Other subsets are rejected.
struct MessageSubset {
  enum class Kind { Single, AdjacentPair, Full };
  Kind kind = Kind::Single;
  int k = 1;  // Single: the receiver; AdjacentPair: the lower index of (k, k+1)

  static MessageSubset single(int k) { return {Kind::Single, k}; }
  static MessageSubset adjacent_pair(int lower) { return {Kind::AdjacentPair, lower}; }
  static MessageSubset full() { return {Kind::Full, 0}; }

  std::string name(int k_receivers) const;
};

inline constexpr std::uint64_t kDefaultEnumBudget = std::uint64_t{1} << 26;

// Exact equivocation rate (1/n) H(W_S | Z) for the fixed codebook, by full
// enumeration: p(z) and the message posterior are computed over every z
// sequence and every index path under uniform priors. Log-domain with
// max-shift normalization per z. Requires |Z|^n * paths <= enum_budget.
double exact_equivocation(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                          const MessageSubset& subset,
                          std::uint64_t enum_budget = kDefaultEnumBudget);

struct McEstimate {
  double value = 0.0;      // bits per channel use
  double std_error = 0.0;  // +inf sentinel when samples == 1
  long long samples = 0;
};

// Unbiased Monte Carlo estimate of the same quantity: z is sampled by
// simulating uniform messages, H(W_S | Z = z) is computed exactly per
// sample. Requires paths * n <= enum_budget.
McEstimate mc_equivocation(const CodebookHierarchy& book, const DegradedBcSpec& spec,
                           const MessageSubset& subset, long long samples,
                           SplitRng rng, std::uint64_t enum_budget = kDefaultEnumBudget);

// Genie-aided wiretapper: given the true message and all ancestor indices,
// ML-decode the secret index inside the message's subcode from z (the
// likelihood is the induced single-letter U_layer -> Z law; ties resolve to
// the first maximizer, the Bayes-optimal convention under uniform secrets).
struct WiretapDecodeStats {
  int layer = 0;
  double average_error = 0.0;          // lambda bar
  std::vector<double> subcode_errors;  // lambda_i, empirical per subcode
  std::vector<double> weights;         // q_i, empirical visit masses (sum to 1)
  long long trials = 0;
};

WiretapDecodeStats wiretapper_subcode_error(const CodebookHierarchy& book,
                                            const DegradedBcSpec& spec, int layer,
                                            long long trials, SplitRng rng);

// Secrecy accounting against the actual message alphabets: the reference
// rate for layer k is (1/n) log2 L_k (not the nominal R_k), so ceiling
// effects never bias the leakage gaps.
struct EquivocationReport {
  std::vector<double> reference_rates;  // per receiver
  std::vector<double> single;           // R_e(k); NaN when not computed
  std::vector<double> pair;             // R_e(k,k+1), k = 1..K-1
  double sum = 0.0;                     // R_e(1..K)
  bool sum_set = false;
  std::vector<double> single_gap;
  std::vector<double> pair_gap;
  double sum_gap = 0.0;
  std::vector<bool> single_ok;
  std::vector<bool> pair_ok;
  bool sum_ok = true;
  std::string method;  // "exact" or "monte-carlo"
  long long samples = 0;
  std::vector<double> single_se;
  std::vector<double> pair_se;
  double sum_se = 0.0;
  double tolerance = 0.0;
};

struct EquivocationInputs {
  std::vector<double> single;  // size K, NaN entries allowed
  std::vector<double> pair;    // size K-1, NaN entries allowed
  double sum = std::numeric_limits<double>::quiet_NaN();
  std::string method = "exact";
  long long samples = 0;
  std::vector<double> single_se;
  std::vector<double> pair_se;
  double sum_se = 0.0;
};

EquivocationReport leakage_report(const CodeParams& params,
                                  const EquivocationInputs& inputs, double tolerance);

}  // namespace secbc

#endif
