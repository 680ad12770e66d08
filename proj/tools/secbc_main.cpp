// Command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 parse error,
// 3 budget refusal, 4 internal numerical inconsistency (or any other
// unexpected internal failure).

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "secbc/errors.hpp"
#include "secbc/experiments.hpp"

namespace {

struct CommonArgs {
  std::string spec_path;
  std::string experiment_path;
  std::string out_path;
  std::int64_t seed_override = -1;
  std::int64_t budget_override = -1;
  int threads_override = 0;
};

void apply_overrides(secbc::ExperimentDoc& doc, const CommonArgs& args) {
  if (args.seed_override >= 0) {
    doc.seed = static_cast<std::uint64_t>(args.seed_override);
    doc.optimizer.seed = doc.seed;
  }
  if (args.budget_override >= 0)
    doc.budget_cap = static_cast<std::uint64_t>(args.budget_override);
  if (args.threads_override > 0) doc.optimizer.threads = args.threads_override;
}

int cmd_validate(const std::string& spec_path) {
  const secbc::ChannelSpecDocument doc = secbc::load_channel_spec(spec_path);
  const auto diags = secbc::validate(doc.spec);
  for (const auto& d : diags) std::cerr << "[" << d.code << "] " << d.message << "\n";
  return diags.empty() ? 0 : 1;
}

std::string resolve_out(const CommonArgs& args, const secbc::ExperimentDoc& doc) {
  if (!args.out_path.empty()) return args.out_path;
  if (!doc.out_path.empty()) return doc.out_path;
  throw secbc::ValidationError("no output path: pass --out or set \"out\" in the experiment");
}

int cmd_region(const CommonArgs& args) {
  const secbc::ChannelSpecDocument spec = secbc::load_channel_spec(args.spec_path);
  secbc::ExperimentDoc doc = secbc::load_experiment(args.experiment_path);
  apply_overrides(doc, args);
  const secbc::TableData table = secbc::run_region(spec, doc);
  secbc::write_table_atomic(resolve_out(args, doc), table);
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const secbc::ChannelSpecDocument spec = secbc::load_channel_spec(args.spec_path);
  secbc::ExperimentDoc doc = secbc::load_experiment(args.experiment_path);
  apply_overrides(doc, args);
  const secbc::TableData table = secbc::run_simulate(spec, doc);
  secbc::write_table_atomic(resolve_out(args, doc), table);
  return 0;
}

int cmd_export(const std::string& in_path, const std::string& out_path,
               const std::string& kind) {
  const secbc::TableData input = secbc::read_table(in_path);
  const secbc::TableData out = secbc::export_plotdata(input, kind);
  secbc::write_table_atomic(out_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secrecy-rate regions and finite-blocklength coding experiments "
               "for degraded broadcast channels with a wiretapper"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string in_path;
  std::string kind;

  CLI::App* validate = app.add_subcommand("validate", "check a channel spec document");
  validate->add_option("--spec", args.spec_path, "channel spec JSON")->required();

  CLI::App* region = app.add_subcommand("region", "trace the secrecy rate region boundary");
  region->add_option("--spec", args.spec_path, "channel spec JSON")->required();
  region->add_option("--experiment", args.experiment_path, "experiment JSON")->required();
  region->add_option("--out", args.out_path, "output table path (default: document's out)");
  region->add_option("--seed", args.seed_override, "override the document seed");
  region->add_option("--threads", args.threads_override, "optimizer restart threads");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run coding experiments (error rates, equivocation)");
  simulate->add_option("--spec", args.spec_path, "channel spec JSON")->required();
  simulate->add_option("--experiment", args.experiment_path, "experiment JSON")->required();
  simulate->add_option("--out", args.out_path, "output table path (default: document's out)");
  simulate->add_option("--seed", args.seed_override, "override the document seed");
  simulate->add_option("--budget-cap", args.budget_override, "override the symbol budget");
  simulate->add_option("--threads", args.threads_override, "reserved");

  CLI::App* exp = app.add_subcommand("export-plotdata", "reshape a result table for plotting");
  exp->add_option("--in", in_path, "input table")->required();
  exp->add_option("--out", args.out_path, "output table path")->required();
  exp->add_option("--kind", kind, "region | pe-median | gap-median | lambda-median")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage problems belong to the parse-error class
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(args.spec_path);
    if (region->parsed()) return cmd_region(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (exp->parsed()) return cmd_export(in_path, args.out_path, kind);
  } catch (const secbc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const secbc::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const secbc::BudgetError& e) {
    std::cerr << "budget refused: " << e.what() << "\n";
    return 3;
  } catch (const secbc::NumericError& e) {
    std::cerr << "numerical inconsistency: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
