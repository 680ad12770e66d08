#include "secbc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "secbc/errors.hpp"

namespace secbc {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kInfoFloor = -1e-9;

double clamp_information(double v) {
  if (v >= 0.0) return v;
  if (v >= kInfoFloor) return 0.0;
  throw NumericError("information measure fell below the -1e-9 noise floor: " +
                     std::to_string(v));
}

}  // namespace

Distribution::Distribution(std::vector<std::string> labels,
                           std::vector<int> cardinalities,
                           std::vector<double> mass)
    : labels_(std::move(labels)), cards_(std::move(cardinalities)), mass_(std::move(mass)) {
  if (labels_.empty()) throw ValidationError("distribution needs at least one variable");
  if (labels_.size() != cards_.size())
    throw ValidationError("label and cardinality counts differ");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j])
        throw ValidationError("duplicate variable label '" + labels_[i] + "'");
    }
  }
  std::size_t total = 1;
  for (int c : cards_) {
    if (c < 1) throw ValidationError("cardinalities must be positive");
    total *= static_cast<std::size_t>(c);
  }
  if (mass_.size() != total)
    throw ValidationError("mass table has " + std::to_string(mass_.size()) +
                          " entries, alphabet product is " + std::to_string(total));

  strides_.assign(cards_.size(), 1);
  for (int i = static_cast<int>(cards_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(cards_[i + 1]);

  double sum = 0.0;
  for (double p : mass_) {
    if (!(p >= 0.0))
      throw ValidationError("negative or non-finite probability mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kMassTolerance)
    throw ValidationError("probability mass sums to " + std::to_string(sum) +
                          ", expected 1");
}

Distribution Distribution::uniform(std::vector<std::string> labels,
                                   std::vector<int> cardinalities) {
  std::size_t total = 1;
  for (int c : cardinalities) {
    if (c < 1) throw ValidationError("cardinalities must be positive");
    total *= static_cast<std::size_t>(c);
  }
  std::vector<double> mass(total, 1.0 / static_cast<double>(total));
  return Distribution(std::move(labels), std::move(cardinalities), std::move(mass));
}

int Distribution::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  throw ValidationError("unknown variable '" + std::string(label) + "'");
}

std::size_t Distribution::offset(std::span<const int> idx) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < strides_.size(); ++i)
    off += strides_[i] * static_cast<std::size_t>(idx[i]);
  return off;
}

void Distribution::unpack(std::size_t offset, std::span<int> idx) const {
  for (std::size_t i = 0; i < strides_.size(); ++i) {
    idx[i] = static_cast<int>(offset / strides_[i]);
    offset %= strides_[i];
  }
}

double entropy(const Distribution& d) {
  double h = 0.0;
  for (double p : d.mass()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

Distribution marginal(const Distribution& d, const std::vector<std::string>& keep) {
  std::vector<int> kept;
  for (const auto& name : keep) {
    int pos = d.index_of(name);
    if (std::find(kept.begin(), kept.end(), pos) != kept.end())
      throw ValidationError("variable '" + name + "' listed twice in marginal");
    kept.push_back(pos);
  }
  // Preserve the original variable order.
  std::sort(kept.begin(), kept.end());

  std::vector<std::string> labels;
  std::vector<int> cards;
  for (int pos : kept) {
    labels.push_back(d.labels()[pos]);
    cards.push_back(d.cardinalities()[pos]);
  }

  std::vector<std::size_t> out_strides(kept.size(), 1);
  for (int i = static_cast<int>(kept.size()) - 2; i >= 0; --i)
    out_strides[i] = out_strides[i + 1] * static_cast<std::size_t>(cards[i + 1]);

  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);
  std::vector<double> mass(total, 0.0);

  const int nvar = d.variable_count();
  std::vector<int> idx(nvar);
  for (std::size_t off = 0; off < d.size(); ++off) {
    d.unpack(off, idx);
    std::size_t out = 0;
    for (std::size_t i = 0; i < kept.size(); ++i)
      out += out_strides[i] * static_cast<std::size_t>(idx[kept[i]]);
    mass[out] += d.mass()[off];
  }
  return Distribution(std::move(labels), std::move(cards), std::move(mass));
}

double joint_entropy(const Distribution& d, const std::vector<std::string>& vars) {
  return entropy(marginal(d, vars));
}

double mutual_information(const Distribution& d, std::string_view a,
                          std::string_view b) {
  if (a == b) throw ValidationError("mutual information needs two distinct variables");
  const std::string as(a), bs(b);
  Distribution pair = marginal(d, {as, bs});
  double v = joint_entropy(pair, {as}) + joint_entropy(pair, {bs}) - entropy(pair);
  return clamp_information(v);
}

double conditional_mutual_information(const Distribution& d, std::string_view a,
                                      std::string_view b,
                                      const std::vector<std::string>& given) {
  if (given.empty()) return mutual_information(d, a, b);
  const std::string as(a), bs(b);
  if (as == bs) throw ValidationError("conditional MI needs two distinct variables");
  for (const auto& c : given) {
    if (c == as || c == bs)
      throw ValidationError("conditioning set overlaps '" + c + "'");
  }

  std::vector<std::string> ac = {as}, bc = {bs}, abc = {as, bs};
  ac.insert(ac.end(), given.begin(), given.end());
  bc.insert(bc.end(), given.begin(), given.end());
  abc.insert(abc.end(), given.begin(), given.end());

  Distribution joint = marginal(d, abc);
  // I(A;B|C) = H(A,C) + H(B,C) - H(C) - H(A,B,C)
  double v = joint_entropy(joint, ac) + joint_entropy(joint, bc) -
             joint_entropy(joint, given) - entropy(joint);
  return clamp_information(v);
}

}  // namespace secbc
