#ifndef SECBC_RNG_HPP
#define SECBC_RNG_HPP

#include <cstdint>
#include <span>

namespace secbc {

// Splittable counter-based RNG built on the splitmix64 finalizer.
//
// Every consumer (codebook, trial, layer, channel stage, ...) gets its own
// substream derived from the master seed through a chain of fork() tags, so
// simulation results do not depend on execution order or thread scheduling,
// and regenerating any object from the same seed is bit-identical.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(mix(seed + kGamma)) {}

  // Independent substream addressed by an integer tag.
  [[nodiscard]] SplitRng fork(std::uint64_t tag) const {
    SplitRng child(FromState{}, mix(state_ ^ mix(tag + kSplitSalt)));
    return child;
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in {0, ..., bound-1}; bound >= 1.
  std::int64_t next_index(std::int64_t bound) {
    auto v = static_cast<std::int64_t>(next_unit() * static_cast<double>(bound));
    return v >= bound ? bound - 1 : v;
  }

  // Inverse-CDF draw from a probability row (assumed ~stochastic).
  int next_categorical(std::span<const double> pmf) {
    const double u = next_unit();
    double cum = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      cum += pmf[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(pmf.size()) - 1;
  }

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

 private:
  struct FromState {};
  SplitRng(FromState, std::uint64_t raw) : state_(raw) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSplitSalt = 0xd1342543de82ef95ULL;

  std::uint64_t state_;
};

}  // namespace secbc

#endif
