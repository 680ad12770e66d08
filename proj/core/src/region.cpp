#include "secbc/region.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "secbc/errors.hpp"
#include "secbc/rng.hpp"

namespace secbc {

namespace {

constexpr double kNoiseFloor = -1e-9;

// Layer k measures I(A;Y_k|C) - I(A;Z|C) with A = X for the bottom layer and
// A = U_k above it; C = {U_{k+1}} except for the top layer.
struct LayerVars {
  std::string a;
  std::string y;
  std::vector<std::string> cond;
};

LayerVars layer_vars(int k, int k_receivers) {
  LayerVars v;
  v.a = (k == 1) ? "X" : "U" + std::to_string(k);
  v.y = "Y" + std::to_string(k);
  if (k < k_receivers) v.cond = {"U" + std::to_string(k + 1)};
  return v;
}

double checked_rate(double pre_clamp) {
  if (pre_clamp >= 0.0) return pre_clamp;
  if (pre_clamp >= kNoiseFloor) return 0.0;
  throw NumericError("rate expression fell below the degradedness floor: " +
                     std::to_string(pre_clamp));
}

}  // namespace

Distribution induced_joint(const ChainDistribution& chain, const DegradedBcSpec& spec) {
  const int k = spec.k_receivers;
  if (chain.k_receivers() != k)
    throw ValidationError("chain is for K=" + std::to_string(chain.k_receivers()) +
                          " but spec has K=" + std::to_string(k));
  if (chain.x_cardinality() != spec.x_alphabet())
    throw ValidationError("chain emits " + std::to_string(chain.x_cardinality()) +
                          " input symbols but the spec expects " +
                          std::to_string(spec.x_alphabet()));
  if (spec.kernels.size() != static_cast<std::size_t>(k))
    throw ValidationError("spec kernel list is incomplete");
  int prev = spec.base.output_size();
  for (std::size_t i = 0; i < spec.kernels.size(); ++i) {
    if (spec.kernels[i].input_size() != prev)
      throw ValidationError("spec kernels have mismatched dimensions");
    prev = spec.kernels[i].output_size();
  }

  // Variable order: U_K, ..., U_2, X, Y_1, ..., Y_K, Z.
  std::vector<std::string> labels;
  std::vector<int> cards;
  for (int j = 0; j < k; ++j) {
    labels.push_back(chain.variable_label(j));
    cards.push_back(chain.variable_cardinality(j));
  }
  for (int r = 1; r <= k; ++r) {
    labels.push_back("Y" + std::to_string(r));
    cards.push_back(spec.y_alphabet(r));
  }
  labels.push_back("Z");
  cards.push_back(spec.z_alphabet());

  const int nvar = static_cast<int>(cards.size());
  std::size_t total = 1;
  for (int c : cards) total *= static_cast<std::size_t>(c);

  std::vector<double> mass(total);
  std::vector<int> idx(static_cast<std::size_t>(nvar), 0);
  for (std::size_t off = 0; off < total; ++off) {
    double p = 1.0;
    // chain stages: idx[0..k-1] are U_K..U_2,X in emission order
    for (int j = 0; j < k; ++j) {
      const int in = (j == 0) ? 0 : idx[static_cast<std::size_t>(j) - 1];
      p *= chain.stage(j)(in, idx[static_cast<std::size_t>(j)]);
    }
    // channel stages: X -> Y1 -> ... -> YK -> Z
    const int x = idx[static_cast<std::size_t>(k) - 1];
    p *= spec.base(x, idx[static_cast<std::size_t>(k)]);
    for (int s = 0; s < k; ++s) {
      const int from = idx[static_cast<std::size_t>(k) + s];
      const int to = idx[static_cast<std::size_t>(k) + s + 1];
      p *= spec.kernels[static_cast<std::size_t>(s)](from, to);
    }
    mass[off] = p;

    // odometer, last variable fastest
    for (int v = nvar - 1; v >= 0; --v) {
      if (++idx[static_cast<std::size_t>(v)] < cards[static_cast<std::size_t>(v)]) break;
      idx[static_cast<std::size_t>(v)] = 0;
    }
  }
  return Distribution(std::move(labels), std::move(cards), std::move(mass));
}

std::vector<double> rate_expressions(const ChainDistribution& chain,
                                     const DegradedBcSpec& spec) {
  const Distribution joint = induced_joint(chain, spec);
  const int k = spec.k_receivers;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int layer = 1; layer <= k; ++layer) {
    const LayerVars v = layer_vars(layer, k);
    const double iy = conditional_mutual_information(joint, v.a, v.y, v.cond);
    const double iz = conditional_mutual_information(joint, v.a, "Z", v.cond);
    out.push_back(iy - iz);
  }
  return out;
}

RateTuple rate_tuple(const ChainDistribution& chain, const DegradedBcSpec& spec) {
  std::vector<double> pre = rate_expressions(chain, spec);
  for (double& r : pre) r = checked_rate(r);
  return RateTuple{std::move(pre)};
}

RandomizationRates randomization_rates(const ChainDistribution& chain,
                                       const DegradedBcSpec& spec, double tau) {
  if (!(tau >= 0.0)) throw ValidationError("tau must be nonnegative");
  const Distribution joint = induced_joint(chain, spec);
  const int k = spec.k_receivers;
  RandomizationRates out;
  out.tau = tau;
  for (int layer = 1; layer <= k; ++layer) {
    const LayerVars v = layer_vars(layer, k);
    const double iz = conditional_mutual_information(joint, v.a, "Z", v.cond);
    out.rates.push_back(std::max(0.0, iz - tau));
  }
  return out;
}

std::vector<LayerCheck> check_code_rates(const ChainDistribution& chain,
                                         const DegradedBcSpec& spec,
                                         const RateTuple& rates,
                                         const RandomizationRates& rand_rates) {
  const int k = spec.k_receivers;
  if (rates.rates.size() != static_cast<std::size_t>(k) ||
      rand_rates.rates.size() != static_cast<std::size_t>(k))
    throw ValidationError("rate tuples must have one entry per receiver");
  const Distribution joint = induced_joint(chain, spec);
  std::vector<LayerCheck> out;
  for (int layer = 1; layer <= k; ++layer) {
    const LayerVars v = layer_vars(layer, k);
    const double rhs = conditional_mutual_information(joint, v.a, v.y, v.cond);
    const double lhs = rates.rates[static_cast<std::size_t>(layer) - 1] +
                       rand_rates.rates[static_cast<std::size_t>(layer) - 1];
    const double margin = rhs - lhs;
    out.push_back({layer, lhs, rhs, margin, margin >= kNoiseFloor});
  }
  return out;
}

std::pair<RateTuple, RandomizationRates> plan_code_rates(
    const ChainDistribution& chain, const DegradedBcSpec& spec, double scale,
    double tau) {
  if (!(scale > 0.0 && scale <= 1.0)) throw ValidationError("scale must be in (0,1]");
  if (!(tau >= 0.0)) throw ValidationError("tau must be nonnegative");
  const Distribution joint = induced_joint(chain, spec);
  const int k = spec.k_receivers;
  RateTuple msg;
  RandomizationRates rnd;
  rnd.tau = tau;
  for (int layer = 1; layer <= k; ++layer) {
    const LayerVars v = layer_vars(layer, k);
    const double rhs = conditional_mutual_information(joint, v.a, v.y, v.cond);
    const double iz = conditional_mutual_information(joint, v.a, "Z", v.cond);
    const double total = scale * rhs;
    const double rp = std::min(std::max(0.0, iz - tau), total);
    msg.rates.push_back(std::max(0.0, total - rp));
    rnd.rates.push_back(rp);
  }
  return {std::move(msg), std::move(rnd)};
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

namespace {

// A chain candidate as a flat list of simplex rows: stage 0 contributes one
// row, every later stage one row per input symbol.
struct RowLayout {
  int stage;
  int row;
  int width;
};

struct Candidate {
  std::vector<std::vector<double>> rows;  // aligned with the layout
};

std::vector<int> stage_output_cards(int k, int x_card, const std::vector<int>& aux) {
  // aux = (|U_2|, ..., |U_K|); stage j emits U_{K-j}, the last stage emits X.
  std::vector<int> out;
  for (int j = 0; j < k; ++j)
    out.push_back(j == k - 1 ? x_card : aux[static_cast<std::size_t>(k - 2 - j)]);
  return out;
}

std::vector<RowLayout> make_layout(const std::vector<int>& stage_cards) {
  std::vector<RowLayout> layout;
  int prev = 1;
  for (std::size_t j = 0; j < stage_cards.size(); ++j) {
    for (int r = 0; r < prev; ++r)
      layout.push_back({static_cast<int>(j), r, stage_cards[j]});
    prev = stage_cards[j];
  }
  return layout;
}

ChainDistribution build_chain(int k, const std::vector<int>& stage_cards,
                              const std::vector<RowLayout>& layout,
                              const Candidate& cand) {
  std::vector<std::vector<double>> tables(stage_cards.size());
  int prev = 1;
  for (std::size_t j = 0; j < stage_cards.size(); ++j) {
    tables[j].assign(static_cast<std::size_t>(prev) * stage_cards[j], 0.0);
    prev = stage_cards[j];
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const RowLayout& rl = layout[i];
    std::copy(cand.rows[i].begin(), cand.rows[i].end(),
              tables[static_cast<std::size_t>(rl.stage)].begin() +
                  static_cast<std::size_t>(rl.row) * rl.width);
  }
  std::vector<DiscreteChannel> stages;
  prev = 1;
  for (std::size_t j = 0; j < stage_cards.size(); ++j) {
    stages.emplace_back(prev, stage_cards[j], std::move(tables[j]));
    prev = stage_cards[j];
  }
  return ChainDistribution(k, std::move(stages));
}

// Clip negatives and renormalize; rows produced by the search stay on the
// simplex up to float noise.
void project_row(std::vector<double>& row) {
  double sum = 0.0;
  for (double& v : row) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    return;
  }
  for (double& v : row) v /= sum;
}

struct Objective {
  const DegradedBcSpec* spec;
  int k;
  const std::vector<int>* stage_cards;
  const std::vector<RowLayout>* layout;
  std::span<const double> weights;

  double operator()(const Candidate& cand) const {
    const ChainDistribution chain = build_chain(k, *stage_cards, *layout, cand);
    const RateTuple rt = rate_tuple(chain, *spec);
    double v = 0.0;
    for (std::size_t i = 0; i < rt.rates.size(); ++i) v += weights[i] * rt.rates[i];
    return v;
  }
};

Candidate uniform_candidate(const std::vector<RowLayout>& layout) {
  Candidate c;
  for (const RowLayout& rl : layout)
    c.rows.emplace_back(static_cast<std::size_t>(rl.width),
                        1.0 / static_cast<double>(rl.width));
  return c;
}

// Point-mass rows spread over the output alphabet; a useful superposition
// starting point (deterministic cloud centers, uniform top).
Candidate spread_candidate(const std::vector<RowLayout>& layout) {
  Candidate c;
  for (const RowLayout& rl : layout) {
    std::vector<double> row(static_cast<std::size_t>(rl.width), 0.0);
    if (rl.stage == 0) {
      row.assign(static_cast<std::size_t>(rl.width), 1.0 / rl.width);
    } else {
      row[static_cast<std::size_t>(rl.row % rl.width)] = 1.0;
    }
    c.rows.push_back(std::move(row));
  }
  return c;
}

Candidate random_candidate(const std::vector<RowLayout>& layout, SplitRng rng) {
  Candidate c;
  for (const RowLayout& rl : layout) {
    std::vector<double> row(static_cast<std::size_t>(rl.width));
    double sum = 0.0;
    for (double& v : row) {
      // exponential draws normalize to a flat Dirichlet sample
      v = -std::log(1.0 - rng.next_unit());
      sum += v;
    }
    for (double& v : row) v /= sum;
    c.rows.push_back(std::move(row));
  }
  return c;
}

// Line search from `row` toward each vertex of its simplex: coarse scan in
// t over [0,1], then one refinement pass around the best coarse point.
bool improve_row(const Objective& objective, Candidate& cand, std::size_t row_index,
                 double tolerance) {
  const std::vector<double> base_row = cand.rows[row_index];
  const int width = static_cast<int>(base_row.size());
  double best = objective(cand);
  std::vector<double> best_row = base_row;
  bool improved = false;

  constexpr int kCoarse = 16;
  for (int vertex = 0; vertex < width; ++vertex) {
    double vertex_best = -std::numeric_limits<double>::infinity();
    double vertex_best_t = 0.0;
    auto eval_t = [&](double t) {
      std::vector<double>& row = cand.rows[row_index];
      for (int i = 0; i < width; ++i) {
        const double target = (i == vertex) ? 1.0 : 0.0;
        row[static_cast<std::size_t>(i)] =
            (1.0 - t) * base_row[static_cast<std::size_t>(i)] + t * target;
      }
      project_row(row);
      const double v = objective(cand);
      if (v > vertex_best) {
        vertex_best = v;
        vertex_best_t = t;
      }
      return v;
    };
    for (int s = 1; s <= kCoarse; ++s) eval_t(static_cast<double>(s) / kCoarse);
    const double span = 1.0 / kCoarse;
    for (int s = -3; s <= 3; ++s) {
      if (s == 0) continue;
      const double t = vertex_best_t + span * static_cast<double>(s) / 4.0;
      if (t > 0.0 && t <= 1.0) eval_t(t);
    }
    if (vertex_best > best + tolerance) {
      best = vertex_best;
      std::vector<double>& row = cand.rows[row_index];
      for (int i = 0; i < width; ++i) {
        const double target = (i == vertex) ? 1.0 : 0.0;
        row[static_cast<std::size_t>(i)] =
            (1.0 - vertex_best_t) * base_row[static_cast<std::size_t>(i)] +
            vertex_best_t * target;
      }
      project_row(row);
      best_row = row;
      improved = true;
    }
  }
  cand.rows[row_index] = best_row;
  return improved;
}

struct AscentResult {
  double value;
  Candidate candidate;
};

AscentResult run_ascent(const Objective& objective, Candidate start,
                        const OptimizerOptions& options) {
  Candidate cand = std::move(start);
  for (auto& row : cand.rows) project_row(row);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    bool any = false;
    for (std::size_t r = 0; r < cand.rows.size(); ++r)
      any = improve_row(objective, cand, r, options.tolerance) || any;
    if (!any) break;
  }
  return {objective(cand), std::move(cand)};
}

AscentResult run_grid(const Objective& objective, const std::vector<RowLayout>& layout,
                      double step) {
  for (const RowLayout& rl : layout) {
    if (rl.width != 2)
      throw ValidationError("grid search supports binary alphabets only");
  }
  if (!(step > 0.0 && step <= 1.0)) throw ValidationError("grid step must be in (0,1]");
  const int g = static_cast<int>(std::lround(1.0 / step));
  if (g < 1) throw ValidationError("grid step too coarse");

  Candidate cand = uniform_candidate(layout);
  std::vector<int> digits(layout.size(), 0);
  double best = -std::numeric_limits<double>::infinity();
  Candidate best_cand = cand;
  while (true) {
    for (std::size_t r = 0; r < layout.size(); ++r) {
      const double t = static_cast<double>(digits[r]) / g;
      cand.rows[r][0] = 1.0 - t;
      cand.rows[r][1] = t;
    }
    const double v = objective(cand);
    if (v > best) {
      best = v;
      best_cand = cand;
    }
    int pos = static_cast<int>(layout.size()) - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] > g) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return {best, std::move(best_cand)};
}

constexpr std::uint64_t kOptimizerTag = 0x6f7074;  // substream domain

}  // namespace

RegionSample maximize_weighted_sum(const DegradedBcSpec& spec,
                                   std::span<const double> weights,
                                   const OptimizerOptions& options) {
  const int k = spec.k_receivers;
  if (weights.size() != static_cast<std::size_t>(k))
    throw ValidationError("need one weight per receiver");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw ValidationError("weights must sum to 1, got " + std::to_string(wsum));
  std::vector<int> aux = options.cardinalities;
  if (aux.empty()) aux.assign(static_cast<std::size_t>(k - 1), spec.x_alphabet());
  if (aux.size() != static_cast<std::size_t>(k - 1))
    throw ValidationError("need K-1 auxiliary cardinalities");
  for (int c : aux)
    if (c < 1) throw ValidationError("auxiliary cardinalities must be positive");
  if (options.restarts < 1) throw ValidationError("restarts must be at least 1");

  const std::vector<int> stage_cards = stage_output_cards(k, spec.x_alphabet(), aux);
  const std::vector<RowLayout> layout = make_layout(stage_cards);
  const Objective objective{&spec, k, &stage_cards, &layout, weights};

  AscentResult best{-std::numeric_limits<double>::infinity(), uniform_candidate(layout)};
  int best_restart = -1;

  if (options.method == OptimizerOptions::Method::Grid) {
    best = run_grid(objective, layout, options.grid_step);
    best_restart = 0;
  } else {
    const SplitRng root = SplitRng(options.seed).fork(kOptimizerTag);
    auto run_restart = [&](int r) {
      Candidate start = (r == 0)   ? uniform_candidate(layout)
                        : (r == 1) ? spread_candidate(layout)
                                   : random_candidate(layout, root.fork(
                                         static_cast<std::uint64_t>(r)));
      return run_ascent(objective, std::move(start), options);
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1) {
      for (int r = 0; r < options.restarts; ++r) {
        AscentResult res = run_restart(r);
        if (res.value > best.value) {
          best = std::move(res);
          best_restart = r;
        }
      }
    } else {
      std::vector<std::future<AscentResult>> futures;
      futures.reserve(static_cast<std::size_t>(options.restarts));
      for (int r = 0; r < options.restarts; ++r)
        futures.push_back(std::async(std::launch::async, run_restart, r));
      // merge in restart order: deterministic regardless of scheduling
      for (int r = 0; r < options.restarts; ++r) {
        AscentResult res = futures[static_cast<std::size_t>(r)].get();
        if (res.value > best.value) {
          best = std::move(res);
          best_restart = r;
        }
      }
    }
    (void)best_restart;
  }

  ChainDistribution chain = build_chain(k, stage_cards, layout, best.candidate);
  RegionSample sample{std::vector<double>(weights.begin(), weights.end()),
                      rate_tuple(chain, spec), std::move(chain), best.value};
  return sample;
}

std::vector<RegionSample> trace_boundary(
    const DegradedBcSpec& spec, const std::vector<std::vector<double>>& weight_grid,
    const OptimizerOptions& options) {
  if (weight_grid.empty()) throw ValidationError("weight grid must be nonempty");
  std::vector<RegionSample> out;
  out.reserve(weight_grid.size());
  for (const auto& w : weight_grid)
    out.push_back(maximize_weighted_sum(spec, w, options));
  return out;
}

}  // namespace secbc
