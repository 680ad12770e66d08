#ifndef SECBC_DOCUMENTS_HPP
#define SECBC_DOCUMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "secbc/chain.hpp"
#include "secbc/channel.hpp"
#include "secbc/equivocation.hpp"
#include "secbc/region.hpp"

namespace secbc {

// JSON channel-spec document: K, the base transition table and the K
// degradation kernels as nested arrays of decimals, optional name and
// description. Probabilities are read exactly as written and never
// renormalized; numeric problems surface through validate().
struct ChannelSpecDocument {
  std::string name;
  std::string description;
  DegradedBcSpec spec;

  bool operator==(const ChannelSpecDocument&) const = default;
};

ChannelSpecDocument parse_channel_spec(const std::string& json_text);
ChannelSpecDocument load_channel_spec(const std::filesystem::path& path);
std::string render_channel_spec(const ChannelSpecDocument& doc);

// How simulation code rates are chosen: written out explicitly, or derived
// from the chain as scale * layer bound with the randomization rate set to
// the wiretapper information minus tau.
struct RatesRule {
  enum class Kind { Explicit, ScaledBounds };
  Kind kind = Kind::ScaledBounds;
  std::vector<double> message;        // Explicit
  std::vector<double> randomization;  // Explicit
  double scale = 0.7;                 // ScaledBounds
  double tau = 0.0;
};

struct EquivOptions {
  bool enabled = false;
  std::vector<MessageSubset> subsets;
  std::string method = "exact";  // or "mc"
  long long samples = 200;
  long long lambda_trials = 0;  // wiretapper subcode decoding; 0 = skip
  std::uint64_t enum_budget = kDefaultEnumBudget;
  double tolerance = 0.05;  // leakage gap pass threshold
};

// JSON experiment document. `seed` is mandatory; mode-specific required
// fields are checked at parse time.
struct ExperimentDoc {
  enum class Mode { Region, Simulate, Equivocation };
  Mode mode = Mode::Region;
  std::uint64_t seed = 0;
  std::string out_path;  // optional default; the CLI --out flag overrides

  // region
  std::vector<std::vector<double>> weights;
  OptimizerOptions optimizer;
  double tau = 0.0;  // randomization slack reported alongside the boundary

  // simulate / equivocation
  std::optional<ChainDistribution> chain;
  std::vector<int> n_list;
  long long trials = 1000;
  int codebooks = 1;
  RatesRule rates;
  DecoderKind decoder = DecoderKind::MaximumLikelihood;
  double epsilon = 0.1;  // typicality tolerance
  std::uint64_t budget_cap = std::uint64_t{1} << 24;
  EquivOptions equivocation;
};

ExperimentDoc parse_experiment(const std::string& json_text);
ExperimentDoc load_experiment(const std::filesystem::path& path);

}  // namespace secbc

#endif
