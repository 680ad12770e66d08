#include "secbc/channel.hpp"

#include <cmath>

#include "secbc/errors.hpp"

namespace secbc {

DiscreteChannel::DiscreteChannel(int input_size, int output_size,
                                 std::vector<double> rows)
    : input_size_(input_size), output_size_(output_size), rows_(std::move(rows)) {
  if (input_size_ < 1 || output_size_ < 1)
    throw ValidationError("channel alphabet sizes must be positive");
  if (rows_.size() !=
      static_cast<std::size_t>(input_size_) * static_cast<std::size_t>(output_size_))
    throw ValidationError("transition table has " + std::to_string(rows_.size()) +
                          " entries, expected " +
                          std::to_string(input_size_ * output_size_));
  for (double v : rows_) {
    if (!std::isfinite(v))
      throw ValidationError("non-finite transition probability");
  }
}

DiscreteChannel DiscreteChannel::identity(int size) {
  std::vector<double> rows(static_cast<std::size_t>(size) * size, 0.0);
  for (int i = 0; i < size; ++i) rows[static_cast<std::size_t>(i) * size + i] = 1.0;
  return DiscreteChannel(size, size, std::move(rows));
}

DiscreteChannel DiscreteChannel::binary_symmetric(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0))
    throw ValidationError("binary symmetric crossover must be in [0,1]");
  return DiscreteChannel(2, 2,
                         {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

DiscreteChannel DiscreteChannel::constant_row(int input_size, std::vector<double> row) {
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(input_size) * row.size());
  for (int i = 0; i < input_size; ++i) rows.insert(rows.end(), row.begin(), row.end());
  return DiscreteChannel(input_size, static_cast<int>(row.size()), std::move(rows));
}

bool DiscreteChannel::row_stochastic(double tolerance) const {
  for (int i = 0; i < input_size_; ++i) {
    double sum = 0.0;
    for (double v : row(i)) {
      if (v < 0.0) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) return false;
  }
  return true;
}

DiscreteChannel compose(const DiscreteChannel& a, const DiscreteChannel& b) {
  if (a.output_size() != b.input_size())
    throw ValidationError("cannot compose: first stage emits " +
                          std::to_string(a.output_size()) +
                          " symbols, second consumes " +
                          std::to_string(b.input_size()));
  std::vector<double> rows(
      static_cast<std::size_t>(a.input_size()) * b.output_size(), 0.0);
  for (int i = 0; i < a.input_size(); ++i) {
    for (int j = 0; j < a.output_size(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int k = 0; k < b.output_size(); ++k)
        rows[static_cast<std::size_t>(i) * b.output_size() + k] += aij * b(j, k);
    }
  }
  return DiscreteChannel(a.input_size(), b.output_size(), std::move(rows));
}

int DegradedBcSpec::y_alphabet(int k) const {
  if (k < 1 || k > k_receivers)
    throw ValidationError("receiver index " + std::to_string(k) + " out of range 1.." +
                          std::to_string(k_receivers));
  if (k == 1) return base.output_size();
  return kernels[static_cast<std::size_t>(k) - 2].output_size();
}

int DegradedBcSpec::z_alphabet() const {
  if (kernels.empty()) throw ValidationError("spec has no wiretap kernel");
  return kernels.back().output_size();
}

namespace {

std::string stage_name(int stage_index, int k_receivers) {
  if (stage_index == 0) return "base";
  if (stage_index == k_receivers) return "kernel " + std::to_string(stage_index) + " (wiretap)";
  return "kernel " + std::to_string(stage_index);
}

void check_rows(const DiscreteChannel& ch, const std::string& name,
                std::vector<Diagnostic>& out) {
  for (int i = 0; i < ch.input_size(); ++i) {
    double sum = 0.0;
    bool negative = false;
    for (double v : ch.row(i)) {
      if (v < 0.0) negative = true;
      sum += v;
    }
    if (negative)
      out.push_back({"negative-entry",
                     name + " row " + std::to_string(i) + " has a negative entry"});
    if (std::abs(sum - 1.0) > 1e-9)
      out.push_back({"row-sum", name + " row " + std::to_string(i) + " sums to " +
                                    std::to_string(sum) + ", expected 1"});
  }
}

}  // namespace

std::vector<Diagnostic> validate(const DegradedBcSpec& spec) {
  std::vector<Diagnostic> out;
  if (spec.k_receivers < 1) {
    out.push_back({"k-receivers", "k_receivers is " + std::to_string(spec.k_receivers) +
                                      ", must be at least 1"});
  }
  if (spec.kernels.size() != static_cast<std::size_t>(spec.k_receivers) &&
      spec.k_receivers >= 1) {
    out.push_back({"kernel-count",
                   "spec declares " + std::to_string(spec.k_receivers) +
                       " receivers, so it needs exactly " +
                       std::to_string(spec.k_receivers) + " kernels, found " +
                       std::to_string(spec.kernels.size())});
  }

  check_rows(spec.base, "base", out);
  for (std::size_t i = 0; i < spec.kernels.size(); ++i)
    check_rows(spec.kernels[i], stage_name(static_cast<int>(i) + 1, spec.k_receivers), out);

  int prev_out = spec.base.output_size();
  for (std::size_t i = 0; i < spec.kernels.size(); ++i) {
    const int in = spec.kernels[i].input_size();
    if (in != prev_out) {
      const std::string prev = stage_name(static_cast<int>(i), spec.k_receivers);
      const std::string cur = stage_name(static_cast<int>(i) + 1, spec.k_receivers);
      out.push_back({"dimension", cur + " consumes " + std::to_string(in) +
                                      " symbols but " + prev + " emits " +
                                      std::to_string(prev_out)});
    }
    prev_out = spec.kernels[i].output_size();
  }
  return out;
}

DiscreteChannel receiver_channel(const DegradedBcSpec& spec, int k) {
  if (k < 1 || k > spec.k_receivers)
    throw ValidationError("receiver index " + std::to_string(k) + " out of range 1.." +
                          std::to_string(spec.k_receivers));
  DiscreteChannel ch = spec.base;
  for (int i = 0; i < k - 1; ++i) ch = compose(ch, spec.kernels[static_cast<std::size_t>(i)]);
  return ch;
}

DiscreteChannel wiretap_channel(const DegradedBcSpec& spec) {
  if (spec.kernels.size() != static_cast<std::size_t>(spec.k_receivers))
    throw ValidationError("spec kernel list is incomplete");
  return compose(receiver_channel(spec, spec.k_receivers), spec.kernels.back());
}

}  // namespace secbc
