#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "superres/signal.hpp"
#include "superres/stats.hpp"

namespace superres {

/// Half-widths of the search box around F, one per spike and coordinate.
struct SearchBox {
  std::vector<double> node;
  std::vector<double> amplitude;
};

/// Spread of the feasible candidates found on the search grid.
///
/// Every diameter is an inner approximation: the true projected error set
/// contains the reported spread.
struct DiameterEstimate {
  std::vector<double> per_node_diam;
  std::vector<double> per_amp_diam;
  int grid_resolution = 0;
  SearchBox box;
  std::vector<double> node_cell;  ///< grid spacing per node coordinate
  std::vector<double> amp_cell;   ///< grid spacing per amplitude coordinate
  std::size_t feasible_count = 0;
  std::size_t candidate_count = 0;
  std::vector<std::string> warnings;
};

inline constexpr int kMaxOracleResolution = 80;

/// Exhaustive search of positive d-spike signals (d <= 2) on the product grid
/// centred at F. A candidate is feasible when
/// max_s |F'^(s) - F^(s)| <= epsilon over `s_samples` equispaced s in
/// [-omega, omega]. Each coordinate uses 2*floor(resolution/2)+1 levels, so
/// F itself is on the grid and always counted. Candidate nodes must be
/// ordered with a gap of at least one node cell.
///
/// Warnings: "resolution insufficient" when nothing but F is feasible for a
/// positive budget, and a boundary warning when feasible points touch the
/// box edge (the diameter is then truncated by the box).
DiameterEstimate error_set_diameters(const SpikeSignal& signal, double epsilon, double omega,
                                     const SearchBox& box, int grid_resolution,
                                     std::size_t s_samples = 64, std::size_t workers = 0);

struct OracleConfig {
  double node_box_factor = 0.25;  ///< node half-width = factor * epsilon / omega
  double amp_box_factor = 1.5;    ///< amplitude half-width = factor * epsilon
  int grid_resolution = 60;
  std::size_t s_samples = 64;
  std::size_t workers = 0;
};

struct ScalingReport {
  std::vector<double> epsilons;
  std::vector<DiameterEstimate> estimates;
  std::vector<SlopeFit> node_slopes;  ///< per spike; slope of diameter vs epsilon
  std::vector<SlopeFit> amp_slopes;
  std::vector<std::string> warnings;
};

/// Runs the search for each epsilon (box scaled with epsilon) and fits
/// log-log slopes of every diameter against epsilon.
ScalingReport diameter_epsilon_scaling(const SpikeSignal& signal, double omega,
                                       const std::vector<double>& epsilons,
                                       const OracleConfig& config = {});

/// Box proportional to epsilon, as used by the scaling sweep.
SearchBox proportional_box(std::size_t d, double epsilon, double omega, const OracleConfig& config);

}  // namespace superres
