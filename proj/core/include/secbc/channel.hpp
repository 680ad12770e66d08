#ifndef SECBC_CHANNEL_HPP
#define SECBC_CHANNEL_HPP

#include <span>
#include <string>
#include <vector>

namespace secbc {

// Per-symbol transition table p(output | input) of a discrete memoryless
// channel. Construction checks shape and finiteness only; stochasticity of
// the rows is reported through validate() so that authoring mistakes can be
// diagnosed instead of hidden, and is required by every compute operation.
class DiscreteChannel {
 public:
  // Degenerate 1x1 channel; placeholder until a real table is assigned.
  DiscreteChannel() : input_size_(1), output_size_(1), rows_{1.0} {}
  DiscreteChannel(int input_size, int output_size, std::vector<double> rows);

  static DiscreteChannel identity(int size);
  static DiscreteChannel binary_symmetric(double crossover);
  // Output distribution independent of the input.
  static DiscreteChannel constant_row(int input_size, std::vector<double> row);

  int input_size() const { return input_size_; }
  int output_size() const { return output_size_; }
  double operator()(int in, int out) const {
    return rows_[static_cast<std::size_t>(in) * output_size_ + out];
  }
  std::span<const double> row(int in) const {
    return {rows_.data() + static_cast<std::size_t>(in) * output_size_,
            static_cast<std::size_t>(output_size_)};
  }
  const std::vector<double>& rows() const { return rows_; }

  bool row_stochastic(double tolerance = 1e-9) const;

  bool operator==(const DiscreteChannel&) const = default;

 private:
  int input_size_;
  int output_size_;
  std::vector<double> rows_;  // row-major [input][output]
};

// Cascade a then b; requires a.output_size() == b.input_size().
DiscreteChannel compose(const DiscreteChannel& a, const DiscreteChannel& b);

// K-receiver degraded broadcast channel with an external wiretapper,
// degraded by construction: X -> Y1 -> Y2 -> ... -> YK -> Z.
//
// base is X -> Y1; kernels[i] maps Y_{i+1} -> Y_{i+2} for i < K-1 and the
// last kernel maps Y_K -> Z, so the list always has exactly K entries.
// Receiver 1 is the strongest, receiver K the weakest, the wiretapper is
// degraded beyond receiver K.
struct DegradedBcSpec {
  int k_receivers;
  DiscreteChannel base;
  std::vector<DiscreteChannel> kernels;

  int x_alphabet() const { return base.input_size(); }
  int y_alphabet(int k) const;  // k in 1..K
  int z_alphabet() const;

  bool operator==(const DegradedBcSpec&) const = default;
};

struct Diagnostic {
  std::string code;     // stable machine-readable class, e.g. "row-sum"
  std::string message;  // human-readable, names the stage and row
};

// Structural and numeric checks: K >= 1, kernel count, adjacent dimension
// compatibility, nonnegative rows summing to 1 within 1e-9. Returns every
// violation found instead of failing on the first.
std::vector<Diagnostic> validate(const DegradedBcSpec& spec);

// Marginal channel X -> Y_k (base composed with the first k-1 kernels).
DiscreteChannel receiver_channel(const DegradedBcSpec& spec, int k);

// Marginal channel X -> Z (base composed with all K kernels).
DiscreteChannel wiretap_channel(const DegradedBcSpec& spec);

}  // namespace secbc

#endif
