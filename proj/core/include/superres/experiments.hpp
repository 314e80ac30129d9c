#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "superres/cluster.hpp"
#include "superres/stats.hpp"

namespace superres {

/// How a trial chooses its noise level.
///
/// `fixed` uses `value` as epsilon. `rate_bound` draws epsilon log-uniformly
/// in [r/100, r] with r = value * (omega * tau * h)^(2p-1), which keeps every
/// trial inside the regime where the cluster rates apply.
struct EpsilonRule {
  enum class Kind { fixed, rate_bound };
  Kind kind = Kind::rate_bound;
  double value = 0.1;

  friend bool operator==(const EpsilonRule&, const EpsilonRule&) = default;
};

struct ExperimentConfig {
  ClusterSpec spec{.d = 3, .p = 2, .h = 0.4, .big_t = 4.0, .tau = 0.5, .eta = 0.25};
  double omega = 1.0;
  std::size_t n_samples = 33;
  EpsilonRule epsilon_rule;
  std::size_t n_trials = 300;
  std::vector<double> srf_sweep{2.0, 2.8, 4.0, 5.7, 8.0, 11.0, 16.0};
  std::uint64_t base_seed = 1;
  double quantile = 0.5;
  double position_jitter = 0.5;  ///< random global translation, uniform in [-j, j] / omega
  std::size_t workers = 0;

  /// Throws Error("experiments", "invalid config") on unusable settings.
  void validate() const;
  /// Cluster spec with h set so that 1 / (omega * tau * h) = srf.
  ClusterSpec spec_for_srf(double srf) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline constexpr double kEpsilonFloor = 1e-14;

struct NodeOutcome {
  std::size_t index = 0;
  bool cluster = false;
  double e = 0.0;  ///< |x_j - estimated x_j|
  bool succ = false;
  std::optional<double> k_x;
  std::optional<double> k_a;

  friend bool operator==(const NodeOutcome&, const NodeOutcome&) = default;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double srf = 0.0;
  double epsilon = 0.0;
  bool failed = false;
  std::string error;
  std::vector<double> true_nodes;
  std::vector<NodeOutcome> nodes;
  double condition_hint = 0.0;
  double lsq_residual = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// One random experiment: draw F and epsilon, sample, recover, score.
/// Solver failures are recorded (failed = true, no K values), not thrown.
TrialRecord run_single_trial(const ExperimentConfig& config, double srf, std::uint64_t seed);

/// Success rule for node j: e_j strictly below a third of its distance to
/// the nearest other true node.
bool node_succeeded(double e, std::span<const double> true_nodes, std::size_t index);

/// Normalised node error amplification e * omega / epsilon, with epsilon
/// raised to kEpsilonFloor.
double node_amplification(double e, double omega, double epsilon);

/// Normalised amplitude error amplification |a - a_hat| / epsilon (same floor).
double amplitude_amplification(double amplitude_error, double epsilon);

/// Trials at seeds base_seed .. base_seed + n_trials - 1, ordered by seed.
std::vector<TrialRecord> run_batch(const ExperimentConfig& config, double srf);

using SweepResult = std::vector<std::pair<double, std::vector<TrialRecord>>>;

/// run_batch for every SRF in the sweep, in sweep order.
SweepResult run_sweep(const ExperimentConfig& config);

struct SummaryRow {
  double srf = 0.0;
  bool cluster = false;
  double median_kx = 0.0;  ///< configured quantile, median by default
  double median_ka = 0.0;
  std::size_t n_success = 0;
};

struct AmplificationSummary {
  std::vector<SummaryRow> rows;
  std::optional<SlopeFit> cluster_kx_slope;
  std::optional<SlopeFit> cluster_ka_slope;
  double noncluster_max_kx = 0.0;  ///< largest non-cluster quantile over the sweep
  double noncluster_max_ka = 0.0;
  std::vector<std::string> notes;
};

/// Per SRF and node class, the quantile of K over successful nodes, plus
/// log-log slopes of the cluster columns against SRF.
AmplificationSummary summarize_amplification(const SweepResult& sweep, double q);

/// Fraction of successful nodes per node index across a batch.
std::vector<double> success_rates(const std::vector<TrialRecord>& batch);

}  // namespace superres
