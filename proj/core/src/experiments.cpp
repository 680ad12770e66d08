#include "secbc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "secbc/errors.hpp"

namespace secbc {

namespace {

std::string subset_column(const MessageSubset& s, int k) {
  switch (s.kind) {
    case MessageSubset::Kind::Single:
      return std::to_string(s.k);
    case MessageSubset::Kind::AdjacentPair:
      return std::to_string(s.k) + "_" + std::to_string(s.k + 1);
    case MessageSubset::Kind::Full:
      return "sum";
  }
  (void)k;
  return "?";
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

}  // namespace

void require_valid(const ChannelSpecDocument& doc) {
  const auto diags = validate(doc.spec);
  if (diags.empty()) return;
  std::string msg = "channel spec failed validation:";
  for (const auto& d : diags) msg += "\n  [" + d.code + "] " + d.message;
  throw ValidationError(msg);
}

TableData run_region(const ChannelSpecDocument& spec, const ExperimentDoc& experiment) {
  if (experiment.mode != ExperimentDoc::Mode::Region)
    throw ValidationError("experiment mode is not 'region'");
  require_valid(spec);
  const int k = spec.spec.k_receivers;
  for (const auto& w : experiment.weights) {
    if (w.size() != static_cast<std::size_t>(k))
      throw ValidationError("weight vectors must have one entry per receiver");
  }

  const std::vector<RegionSample> samples =
      trace_boundary(spec.spec, experiment.weights, experiment.optimizer);

  TableData table;
  for (int i = 1; i <= k; ++i) table.columns.push_back("w" + std::to_string(i));
  for (int i = 1; i <= k; ++i) table.columns.push_back("R" + std::to_string(i));
  for (int i = 1; i <= k; ++i) table.columns.push_back("Rp" + std::to_string(i));
  table.columns.push_back("value");

  for (const RegionSample& s : samples) {
    const RandomizationRates rnd =
        randomization_rates(s.chain, spec.spec, experiment.tau);
    std::vector<std::string> row;
    for (double w : s.weights) row.push_back(format_sig9(w));
    for (double r : s.rates.rates) row.push_back(format_sig9(r));
    for (double r : rnd.rates) row.push_back(format_sig9(r));
    row.push_back(format_sig9(s.value));
    table.rows.push_back(std::move(row));
  }
  return table;
}

TableData run_simulate(const ChannelSpecDocument& spec, const ExperimentDoc& experiment) {
  if (experiment.mode != ExperimentDoc::Mode::Simulate &&
      experiment.mode != ExperimentDoc::Mode::Equivocation)
    throw ValidationError("experiment mode is not 'simulate' or 'equivocation'");
  require_valid(spec);
  if (!experiment.chain.has_value())
    throw ValidationError("experiment needs a chain");
  const ChainDistribution& chain = *experiment.chain;
  const int k = spec.spec.k_receivers;
  if (chain.k_receivers() != k)
    throw ValidationError("chain and spec disagree on the receiver count");
  const bool with_pe = experiment.mode == ExperimentDoc::Mode::Simulate;
  const EquivOptions& eq = experiment.equivocation;
  const bool mc = eq.method == "mc";

  TableData table;
  table.columns = {"n", "codebook"};
  for (int i = 1; i <= k; ++i) table.columns.push_back("L" + std::to_string(i));
  for (int i = 1; i <= k; ++i) table.columns.push_back("Lp" + std::to_string(i));
  if (with_pe) {
    for (int i = 1; i <= k; ++i) table.columns.push_back("Pe" + std::to_string(i));
    for (int i = 1; i <= k; ++i) table.columns.push_back("PeHw" + std::to_string(i));
  }
  if (eq.enabled) {
    for (int i = 1; i <= k; ++i) table.columns.push_back("Rref" + std::to_string(i));
    for (const auto& s : eq.subsets) table.columns.push_back("Re_" + subset_column(s, k));
    for (const auto& s : eq.subsets) table.columns.push_back("Gap_" + subset_column(s, k));
    if (mc)
      for (const auto& s : eq.subsets) table.columns.push_back("Se_" + subset_column(s, k));
    if (eq.lambda_trials > 0)
      for (int i = 1; i <= k; ++i) table.columns.push_back("Lambda" + std::to_string(i));
  }

  for (int n : experiment.n_list) {
    RateTuple rates;
    RandomizationRates rnd;
    if (experiment.rates.kind == RatesRule::Kind::Explicit) {
      rates.rates = experiment.rates.message;
      rnd.rates = experiment.rates.randomization;
      rnd.tau = experiment.rates.tau;
    } else {
      std::tie(rates, rnd) = plan_code_rates(chain, spec.spec, experiment.rates.scale,
                                             experiment.rates.tau);
    }
    const CodeParams params = make_code_params(n, rates, rnd, experiment.seed,
                                               experiment.budget_cap);

    SimResult sim;
    if (with_pe)
      sim = estimate_error_prob(spec.spec, chain, params, experiment.trials,
                                experiment.codebooks, experiment.decoder,
                                experiment.epsilon);

    std::vector<double> refs;
    for (int i = 1; i <= k; ++i)
      refs.push_back(std::log2(static_cast<double>(
                         params.message_counts[static_cast<std::size_t>(i) - 1])) /
                     static_cast<double>(n));

    for (int m = 0; m < experiment.codebooks; ++m) {
      std::vector<std::string> row;
      row.push_back(format_int(n));
      row.push_back(format_int(m));
      for (long long l : params.message_counts) row.push_back(format_int(l));
      for (long long lp : params.subcode_sizes) row.push_back(format_int(lp));
      if (with_pe) {
        const double t = static_cast<double>(experiment.trials);
        for (int i = 0; i < k; ++i) {
          const double p = static_cast<double>(
                               sim.codebook_errors[static_cast<std::size_t>(m)]
                                                  [static_cast<std::size_t>(i)]) /
                           t;
          row.push_back(format_sig9(p));
        }
        for (int i = 0; i < k; ++i) {
          const double p = static_cast<double>(
                               sim.codebook_errors[static_cast<std::size_t>(m)]
                                                  [static_cast<std::size_t>(i)]) /
                           t;
          row.push_back(format_sig9(1.96 * std::sqrt(p * (1.0 - p) / t)));
        }
      }
      if (eq.enabled) {
        const CodebookHierarchy book(chain, params, static_cast<std::uint64_t>(m));
        for (double r : refs) row.push_back(format_sig9(r));

        // route every computed value through the leakage report; subsets the
        // document did not request stay NaN and are never flagged
        const double nan = std::numeric_limits<double>::quiet_NaN();
        EquivocationInputs inputs;
        inputs.single.assign(static_cast<std::size_t>(k), nan);
        inputs.pair.assign(static_cast<std::size_t>(k > 0 ? k - 1 : 0), nan);
        inputs.method = mc ? "monte-carlo" : "exact";
        inputs.samples = mc ? eq.samples : 0;
        std::vector<double> res;
        std::vector<double> ses;
        for (const auto& s : eq.subsets) {
          double value = 0.0;
          double se = 0.0;
          if (mc) {
            const SplitRng stream =
                SplitRng(experiment.seed).fork(0x6d63).fork(static_cast<std::uint64_t>(m));
            const McEstimate est =
                mc_equivocation(book, spec.spec, s, eq.samples, stream, eq.enum_budget);
            value = est.value;
            se = est.std_error;
          } else {
            value = exact_equivocation(book, spec.spec, s, eq.enum_budget);
          }
          res.push_back(value);
          ses.push_back(se);
          switch (s.kind) {
            case MessageSubset::Kind::Single:
              inputs.single[static_cast<std::size_t>(s.k) - 1] = value;
              break;
            case MessageSubset::Kind::AdjacentPair:
              inputs.pair[static_cast<std::size_t>(s.k) - 1] = value;
              break;
            case MessageSubset::Kind::Full:
              inputs.sum = value;
              break;
          }
        }
        const EquivocationReport rep = leakage_report(params, inputs, eq.tolerance);
        for (double r : res) row.push_back(format_sig9(r));
        for (const auto& s : eq.subsets) {
          double gap = 0.0;
          switch (s.kind) {
            case MessageSubset::Kind::Single:
              gap = rep.single_gap[static_cast<std::size_t>(s.k) - 1];
              break;
            case MessageSubset::Kind::AdjacentPair:
              gap = rep.pair_gap[static_cast<std::size_t>(s.k) - 1];
              break;
            case MessageSubset::Kind::Full:
              gap = rep.sum_gap;
              break;
          }
          row.push_back(format_sig9(gap));
        }
        if (mc)
          for (double se : ses) row.push_back(format_sig9(se));
        if (eq.lambda_trials > 0) {
          for (int layer = 1; layer <= k; ++layer) {
            const SplitRng stream = SplitRng(experiment.seed)
                                        .fork(0x6c616d)
                                        .fork(static_cast<std::uint64_t>(m))
                                        .fork(static_cast<std::uint64_t>(layer));
            const WiretapDecodeStats stats = wiretapper_subcode_error(
                book, spec.spec, layer, eq.lambda_trials, stream);
            row.push_back(format_sig9(stats.average_error));
          }
        }
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

namespace {

bool digits_after_prefix(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.rfind(prefix, 0) != 0) return false;
  for (std::size_t i = prefix.size(); i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return false;
  return true;
}

// medians of `prefix`-named columns grouped by the n column
void append_median_series(const TableData& input, const std::string& prefix,
                          bool numeric_suffix, TableData& out) {
  const std::size_t n_col = input.column_index("n");
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < input.columns.size(); ++i) {
    const bool match = numeric_suffix ? digits_after_prefix(input.columns[i], prefix)
                                      : input.columns[i].rfind(prefix, 0) == 0;
    if (match) cols.push_back(i);
  }
  if (cols.empty())
    throw ParseError("input table has no '" + prefix + "*' columns");

  std::map<long long, std::vector<std::vector<double>>> by_n;  // n -> per-col values
  for (const auto& row : input.rows) {
    const long long n = static_cast<long long>(cell_as_double(row[n_col]));
    auto& bucket = by_n[n];
    if (bucket.empty()) bucket.resize(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      bucket[c].push_back(cell_as_double(row[cols[c]]));
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& [n, bucket] : by_n) {
      out.rows.push_back({input.columns[cols[c]], format_int(n),
                          format_sig9(median(bucket[c]))});
    }
  }
}

}  // namespace

TableData export_plotdata(const TableData& input, const std::string& kind) {
  TableData out;
  out.columns = {"series", "x", "y"};
  if (kind == "region") {
    std::vector<std::size_t> rate_cols;
    for (std::size_t i = 0; i < input.columns.size(); ++i)
      if (digits_after_prefix(input.columns[i], "R")) rate_cols.push_back(i);
    if (rate_cols.empty()) throw ParseError("input table has no R* rate columns");
    for (std::size_t c : rate_cols) {
      for (std::size_t r = 0; r < input.rows.size(); ++r) {
        out.rows.push_back({input.columns[c], format_int(static_cast<long long>(r)),
                            input.rows[r][c]});
      }
    }
    return out;
  }
  if (kind == "pe-median") {
    append_median_series(input, "Pe", true, out);
    return out;
  }
  if (kind == "gap-median") {
    append_median_series(input, "Gap_", false, out);
    return out;
  }
  if (kind == "lambda-median") {
    append_median_series(input, "Lambda", true, out);
    return out;
  }
  throw ValidationError("unknown plot kind '" + kind + "'");
}

}  // namespace secbc
