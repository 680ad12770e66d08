#include "secbc/chain.hpp"

#include <cmath>

#include "secbc/errors.hpp"

namespace secbc {

ChainDistribution::ChainDistribution(int k_receivers, std::vector<DiscreteChannel> stages)
    : k_(k_receivers), stages_(std::move(stages)) {
  if (k_ < 1) throw ValidationError("chain needs at least one receiver");
  if (stages_.size() != static_cast<std::size_t>(k_))
    throw ValidationError("chain for K=" + std::to_string(k_) + " needs exactly " +
                          std::to_string(k_) + " stages, found " +
                          std::to_string(stages_.size()));
  if (stages_[0].input_size() != 1)
    throw ValidationError("top chain stage must have a singleton input");
  for (std::size_t j = 1; j < stages_.size(); ++j) {
    if (stages_[j].input_size() != stages_[j - 1].output_size())
      throw ValidationError("chain stage " + std::to_string(j) + " consumes " +
                            std::to_string(stages_[j].input_size()) +
                            " symbols but the previous stage emits " +
                            std::to_string(stages_[j - 1].output_size()));
  }
  for (std::size_t j = 0; j < stages_.size(); ++j) {
    if (!stages_[j].row_stochastic())
      throw ValidationError("chain stage " + std::to_string(j) +
                            " has a non-stochastic row");
  }
}

ChainDistribution ChainDistribution::uniform_default(const DegradedBcSpec& spec,
                                                     std::vector<int> aux_cards) {
  const int k = spec.k_receivers;
  if (aux_cards.empty()) aux_cards.assign(static_cast<std::size_t>(k > 0 ? k - 1 : 0),
                                          spec.x_alphabet());
  if (aux_cards.size() != static_cast<std::size_t>(k - 1))
    throw ValidationError("need K-1 auxiliary cardinalities");
  std::vector<DiscreteChannel> stages;
  int prev = 1;
  for (int j = 0; j < k; ++j) {
    // Stage j emits U_{K-j}; the final stage emits X.
    const int out = (j == k - 1) ? spec.x_alphabet()
                                 : aux_cards[static_cast<std::size_t>(k - 2 - j)];
    stages.push_back(DiscreteChannel::constant_row(
        prev, std::vector<double>(static_cast<std::size_t>(out), 1.0 / out)));
    prev = out;
  }
  return ChainDistribution(k, std::move(stages));
}

std::string ChainDistribution::variable_label(int j) const {
  if (j < 0 || j >= k_) throw ValidationError("chain stage index out of range");
  if (j == k_ - 1) return "X";
  return "U" + std::to_string(k_ - j);
}

int ChainDistribution::aux_cardinality(int k) const {
  if (k < 2 || k > k_)
    throw ValidationError("auxiliary index " + std::to_string(k) + " out of range 2.." +
                          std::to_string(k_));
  return variable_cardinality(k_ - k);
}

DiscreteChannel chain_to_input(const ChainDistribution& chain, int layer) {
  const int k = chain.k_receivers();
  if (layer < 1 || layer > k) throw ValidationError("layer out of range");
  if (layer == 1) return DiscreteChannel::identity(chain.x_cardinality());
  // U_layer is emitted by stage K-layer; compose the stages below it.
  DiscreteChannel ch = chain.stage(k - layer + 1);
  for (int j = k - layer + 2; j < k; ++j) ch = compose(ch, chain.stage(j));
  return ch;
}

}  // namespace secbc
