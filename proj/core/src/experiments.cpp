#include "superres/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include "superres/error.hpp"
#include "superres/measurement.hpp"
#include "superres/parallel.hpp"
#include "superres/pencil.hpp"
#include "superres/rng.hpp"

namespace superres {

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error("experiments", "invalid config", why); };
  if (!(omega > 0.0) || !std::isfinite(omega)) fail("omega must be positive");
  if (n_samples < 3) fail("n_samples must be at least 3");
  if (n_trials < 1) fail("n_trials must be at least 1");
  if (srf_sweep.empty()) fail("srf sweep is empty");
  for (double s : srf_sweep) {
    if (!(s > 0.0) || !std::isfinite(s)) fail("srf values must be positive");
  }
  if (!(quantile > 0.0 && quantile < 1.0)) fail("quantile must lie in (0, 1)");
  if (!(position_jitter >= 0.0)) fail("position jitter must be nonnegative");
  if (!(epsilon_rule.value >= 0.0) || !std::isfinite(epsilon_rule.value)) fail("epsilon rule value must be >= 0");
  if (epsilon_rule.kind == EpsilonRule::Kind::rate_bound && !(epsilon_rule.value > 0.0)) {
    fail("rate bound constant must be positive");
  }
  if ((n_samples - 1) / 2 < spec.d) fail("n_samples too small for d spikes");
  for (double s : srf_sweep) {
    try {
      spec_for_srf(s).validate();
    } catch (const Error& e) {
      fail("srf " + std::to_string(s) + ": " + e.detail());
    }
  }
}

ClusterSpec ExperimentConfig::spec_for_srf(double srf) const {
  ClusterSpec s = spec;
  s.h = 1.0 / (omega * spec.tau * srf);
  return s;
}

bool node_succeeded(double e, std::span<const double> true_nodes, std::size_t index) {
  return e < min_gap_to_others(true_nodes, index) / 3.0;
}

double node_amplification(double e, double omega, double epsilon) {
  return e * omega / std::max(epsilon, kEpsilonFloor);
}

double amplitude_amplification(double amplitude_error, double epsilon) {
  return amplitude_error / std::max(epsilon, kEpsilonFloor);
}

TrialRecord run_single_trial(const ExperimentConfig& config, double srf, std::uint64_t seed) {
  const ClusterSpec spec = config.spec_for_srf(srf);
  const CounterRng root(seed);

  SpikeSignal signal = make_cluster_signal(spec, UniformAmplitudes{}, seed, true);
  if (config.position_jitter > 0.0) {
    CounterRng jitter = root.substream(stream_tag::kJitter);
    const double w = config.position_jitter / config.omega;
    signal = translate_signal(signal, jitter.uniform(-w, w));
  }

  double epsilon = config.epsilon_rule.value;
  if (config.epsilon_rule.kind == EpsilonRule::Kind::rate_bound) {
    const double rate =
        config.epsilon_rule.value * std::pow(config.omega * spec.tau * spec.h, 2.0 * spec.p - 1.0);
    CounterRng eps_rng = root.substream(stream_tag::kEpsilon);
    epsilon = eps_rng.log_uniform(rate / 100.0, rate);
  }

  TrialRecord rec;
  rec.seed = seed;
  rec.srf = srf;
  rec.epsilon = epsilon;
  rec.true_nodes = signal.nodes();

  const MeasurementGrid grid(config.omega, config.n_samples);
  const Measurement meas = sample_measurement(signal, grid, epsilon, NoiseModel::uniform_disk(), seed);

  std::optional<RecoveryResult> result;
  try {
    result = recover(meas, spec.d);
  } catch (const Error& e) {
    rec.failed = true;
    rec.error = e.name();
  }
  if (result) {
    const auto& est_x = result->estimate.nodes();
    const bool finite = est_x.size() == spec.d && std::all_of(est_x.begin(), est_x.end(), [](double v) {
                          return std::isfinite(v);
                        });
    if (!finite) {
      rec.failed = true;
      rec.error = "non-finite estimate";
    } else {
      rec.condition_hint = result->condition_hint;
      rec.lsq_residual = result->lsq_residual;
    }
  }

  for (std::size_t j = 0; j < spec.d; ++j) {
    NodeOutcome node;
    node.index = j;
    node.cluster = spec.in_cluster(j);
    if (rec.failed) {
      node.e = std::numeric_limits<double>::infinity();
    } else {
      node.e = std::abs(signal.nodes()[j] - result->estimate.nodes()[j]);
      node.succ = node_succeeded(node.e, signal.nodes(), j);
      if (node.succ) {
        node.k_x = node_amplification(node.e, config.omega, epsilon);
        node.k_a = amplitude_amplification(
            std::abs(signal.amplitudes()[j].real() - std::abs(result->estimate.amplitudes()[j])), epsilon);
      }
    }
    rec.nodes.push_back(node);
  }
  return rec;
}

std::vector<TrialRecord> run_batch(const ExperimentConfig& config, double srf) {
  config.validate();
  const auto parts = parallel_chunks<std::vector<TrialRecord>>(
      config.n_trials, config.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<TrialRecord> out;
        out.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) out.push_back(run_single_trial(config, srf, config.base_seed + i));
        return out;
      });
  std::vector<TrialRecord> batch;
  batch.reserve(config.n_trials);
  for (const auto& part : parts) batch.insert(batch.end(), part.begin(), part.end());
  std::sort(batch.begin(), batch.end(), [](const TrialRecord& l, const TrialRecord& r) { return l.seed < r.seed; });
  return batch;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult sweep;
  for (double srf : config.srf_sweep) sweep.emplace_back(srf, run_batch(config, srf));
  return sweep;
}

AmplificationSummary summarize_amplification(const SweepResult& sweep, double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error("experiments", "invalid argument", "quantile must lie in (0, 1)");
  AmplificationSummary summary;
  std::vector<std::pair<double, double>> kx_points;
  std::vector<std::pair<double, double>> ka_points;
  for (const auto& [srf, batch] : sweep) {
    if (batch.empty()) throw Error("experiments", "invalid argument", "empty dataset in sweep");
    for (bool cluster : {true, false}) {
      std::vector<double> kx;
      std::vector<double> ka;
      bool any_node = false;
      for (const auto& rec : batch) {
        for (const auto& node : rec.nodes) {
          if (node.cluster != cluster) continue;
          any_node = true;
          if (node.succ && node.k_x && node.k_a) {
            kx.push_back(*node.k_x);
            ka.push_back(*node.k_a);
          }
        }
      }
      if (!any_node) continue;
      if (kx.empty()) {
        summary.notes.push_back("srf " + std::to_string(srf) + " (" + (cluster ? "cluster" : "non-cluster") +
                                "): every trial failed; omitted");
        continue;
      }
      SummaryRow row{srf, cluster, quantile(kx, q), quantile(ka, q), kx.size()};
      summary.rows.push_back(row);
      if (cluster) {
        if (row.median_kx > 0.0) kx_points.emplace_back(srf, row.median_kx);
        if (row.median_ka > 0.0) ka_points.emplace_back(srf, row.median_ka);
      } else {
        summary.noncluster_max_kx = std::max(summary.noncluster_max_kx, row.median_kx);
        summary.noncluster_max_ka = std::max(summary.noncluster_max_ka, row.median_ka);
      }
    }
  }
  auto try_fit = [&](const std::vector<std::pair<double, double>>& pts) -> std::optional<SlopeFit> {
    try {
      return fit_slope(pts);
    } catch (const Error&) {
      summary.notes.emplace_back("fewer than two usable SRF values; slope not fitted");
      return std::nullopt;
    }
  };
  summary.cluster_kx_slope = try_fit(kx_points);
  summary.cluster_ka_slope = try_fit(ka_points);
  return summary;
}

std::vector<double> success_rates(const std::vector<TrialRecord>& batch) {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& rec : batch) {
    for (const auto& node : rec.nodes) {
      auto& [ok, total] = counts[node.index];
      ok += node.succ ? 1 : 0;
      ++total;
    }
  }
  std::vector<double> rates;
  for (const auto& [index, c] : counts) rates.push_back(static_cast<double>(c.first) / static_cast<double>(c.second));
  return rates;
}

}  // namespace superres
