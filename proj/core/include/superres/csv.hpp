#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "superres/experiments.hpp"

namespace superres {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Inverse of format_double; throws Error("cli", "malformed input") on junk.
double parse_double(std::string_view text);

/// One row per (trial, node): seed,srf,node_index,node_class,e_j,succ,K_x,K_a.
/// node_index is 1-based; K columns are empty when the node failed.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& batch);

/// Reads the per-node columns back into records (epsilon and diagnostics
/// are not part of the table and stay zero). Rows are grouped by seed.
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/// srf,node_class,median_Kx,median_Ka,n_success
void write_summary_csv(std::ostream& out, const AmplificationSummary& summary);

}  // namespace superres
