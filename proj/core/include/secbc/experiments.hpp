#ifndef SECBC_EXPERIMENTS_HPP
#define SECBC_EXPERIMENTS_HPP

#include "secbc/documents.hpp"
#include "secbc/table.hpp"

namespace secbc {

// Throws ValidationError listing every diagnostic when the spec is invalid.
void require_valid(const ChannelSpecDocument& doc);

// Boundary table: one row per weight vector with the weights, the achieved
// secrecy rates, the randomization rates at the document's tau, and the
// optimizer value.
TableData run_region(const ChannelSpecDocument& spec, const ExperimentDoc& experiment);

// Error/leakage table: one row per (n, codebook replicate). Simulate mode
// carries P_e columns (plus equivocation columns when requested);
// equivocation mode carries code sizes, reference rates, equivocation rates,
// leakage gaps and wiretapper subcode errors.
TableData run_simulate(const ChannelSpecDocument& spec, const ExperimentDoc& experiment);

// Long-format (series, x, y) reshape for plotting. Kinds: "region"
// (rate columns vs weight index), "pe-median", "gap-median",
// "lambda-median" (per-n medians over codebook replicates).
TableData export_plotdata(const TableData& input, const std::string& kind);

}  // namespace secbc

#endif
