#ifndef SECBC_CHAIN_HPP
#define SECBC_CHAIN_HPP

#include <string>
#include <vector>

#include "secbc/channel.hpp"

namespace secbc {

// First-order Markov input chain U_K -> U_{K-1} -> ... -> U_2 -> X feeding a
// K-receiver broadcast spec.
//
// The chain is stored as K stages. Stage 0 has a singleton input and emits
// the top auxiliary U_K (for K = 1 it directly emits X, i.e. it is p(x)).
// Stage j for 0 < j < K-1 is the conditional p(u_{K-j} | u_{K-j+1}), and the
// final stage emits X from U_2. Every row must be stochastic within 1e-9;
// the Markov structure holds by construction.
class ChainDistribution {
 public:
  ChainDistribution(int k_receivers, std::vector<DiscreteChannel> stages);

  // Uniform rows everywhere; aux_cards defaults to |X| per auxiliary.
  static ChainDistribution uniform_default(const DegradedBcSpec& spec,
                                           std::vector<int> aux_cards = {});

  int k_receivers() const { return k_; }
  const std::vector<DiscreteChannel>& stages() const { return stages_; }
  const DiscreteChannel& stage(int j) const { return stages_[static_cast<std::size_t>(j)]; }

  // Cardinality of the variable emitted by stage j (j = 0 emits U_K, the
  // last stage emits X).
  int variable_cardinality(int j) const { return stage(j).output_size(); }
  // Label of the variable emitted by stage j: "U<k>" or "X".
  std::string variable_label(int j) const;

  int aux_cardinality(int k) const;  // |U_k| for k in 2..K
  int x_cardinality() const { return stages_.back().output_size(); }

  bool operator==(const ChainDistribution&) const = default;

 private:
  int k_;
  std::vector<DiscreteChannel> stages_;
};

// Channel U_layer -> X induced by the chain tail below the given layer
// (identity when layer == 1, since layer 1 is X itself).
DiscreteChannel chain_to_input(const ChainDistribution& chain, int layer);

}  // namespace secbc

#endif
