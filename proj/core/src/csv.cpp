#include "superres/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "superres/error.hpp"

namespace superres {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error("cli", "malformed input", "not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

constexpr std::string_view kTrialsHeader = "seed,srf,node_index,node_class,e_j,succ,K_x,K_a";

}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& batch) {
  out << kTrialsHeader << '\n';
  for (const auto& rec : batch) {
    for (const auto& node : rec.nodes) {
      out << rec.seed << ',' << format_double(rec.srf) << ',' << node.index + 1 << ','
          << (node.cluster ? "cluster" : "non-cluster") << ',' << format_double(node.e) << ','
          << (node.succ ? 1 : 0) << ',' << (node.k_x ? format_double(*node.k_x) : "") << ','
          << (node.k_a ? format_double(*node.k_a) : "") << '\n';
    }
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrialsHeader) {
    throw Error("cli", "malformed input", "trials CSV header mismatch");
  }
  std::map<std::uint64_t, TrialRecord> by_seed;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 8) {
      throw Error("cli", "malformed input", "trials CSV line " + std::to_string(line_no) + ": expected 8 columns");
    }
    try {
      const std::uint64_t seed = std::stoull(cells[0]);
      TrialRecord& rec = by_seed[seed];
      rec.seed = seed;
      rec.srf = parse_double(cells[1]);
      NodeOutcome node;
      const long index = std::stol(cells[2]);
      if (index < 1) throw Error("cli", "malformed input", "node_index must be >= 1");
      node.index = static_cast<std::size_t>(index - 1);
      node.cluster = cells[3] == "cluster";
      node.e = parse_double(cells[4]);
      node.succ = cells[5] == "1";
      if (!cells[6].empty()) node.k_x = parse_double(cells[6]);
      if (!cells[7].empty()) node.k_a = parse_double(cells[7]);
      if (!node.succ && std::isinf(node.e)) rec.failed = true;
      rec.nodes.push_back(node);
    } catch (const std::logic_error&) {
      throw Error("cli", "malformed input", "trials CSV line " + std::to_string(line_no));
    }
  }
  std::vector<TrialRecord> out;
  for (auto& [seed, rec] : by_seed) out.push_back(std::move(rec));
  return out;
}

void write_summary_csv(std::ostream& out, const AmplificationSummary& summary) {
  out << "srf,node_class,median_Kx,median_Ka,n_success\n";
  for (const auto& row : summary.rows) {
    out << format_double(row.srf) << ',' << (row.cluster ? "cluster" : "non-cluster") << ','
        << format_double(row.median_kx) << ',' << format_double(row.median_ka) << ',' << row.n_success << '\n';
  }
}

}  // namespace superres
