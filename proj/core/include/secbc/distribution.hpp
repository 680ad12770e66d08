#ifndef SECBC_DISTRIBUTION_HPP
#define SECBC_DISTRIBUTION_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace secbc {

// Dense joint probability table over a named product alphabet.
//
// Storage is row-major mixed radix with the last variable varying fastest;
// alphabets are 0-based integer coded. Immutable after construction, so
// instances are safe to share across threads.
//
// Construction enforces the invariants: every entry >= 0, total mass within
// 1e-9 of 1, table size equal to the product of the cardinalities.
class Distribution {
 public:
  Distribution(std::vector<std::string> labels, std::vector<int> cardinalities,
               std::vector<double> mass);

  static Distribution uniform(std::vector<std::string> labels,
                              std::vector<int> cardinalities);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& cardinalities() const { return cards_; }
  const std::vector<double>& mass() const { return mass_; }
  std::size_t size() const { return mass_.size(); }
  int variable_count() const { return static_cast<int>(labels_.size()); }

  // Position of a label; throws ValidationError for unknown names.
  int index_of(std::string_view label) const;

  std::size_t offset(std::span<const int> idx) const;
  void unpack(std::size_t offset, std::span<int> idx) const;
  double at(std::span<const int> idx) const { return mass_[offset(idx)]; }

 private:
  std::vector<std::string> labels_;
  std::vector<int> cards_;
  std::vector<std::size_t> strides_;
  std::vector<double> mass_;
};

// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(const Distribution& d);

// Sums out every variable not in `keep`; kept variables stay in the
// distribution's original order. Mass is conserved.
Distribution marginal(const Distribution& d, const std::vector<std::string>& keep);

// Entropy of the marginal on `vars`, in bits.
double joint_entropy(const Distribution& d, const std::vector<std::string>& vars);

// I(A;B) in bits on the pairwise marginal. Values in [-1e-9, 0) are float
// noise and clamp to 0; anything more negative raises NumericError.
double mutual_information(const Distribution& d, std::string_view a,
                          std::string_view b);

// I(A;B|C) in bits; `given` may be empty (plain mutual information).
// Same clamping convention as mutual_information.
double conditional_mutual_information(const Distribution& d, std::string_view a,
                                      std::string_view b,
                                      const std::vector<std::string>& given);

}  // namespace secbc

#endif
