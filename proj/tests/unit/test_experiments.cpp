#include <gtest/gtest.h>

#include <cmath>

#include "superres/error.hpp"
#include "superres/experiments.hpp"

using namespace superres;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_trials = 12;
  c.srf_sweep = {2.0, 4.0, 8.0};
  c.workers = 1;
  return c;
}

}  // namespace

TEST(NodeSucceeded, ThresholdIsAThirdOfTheNearestGap) {
  const std::vector<double> x{0.0, 0.1, 0.5};
  EXPECT_TRUE(node_succeeded(0.0333, x, 0));
  EXPECT_FALSE(node_succeeded(0.1 / 3.0 + 1e-12, x, 0));
  EXPECT_TRUE(node_succeeded(0.13, x, 2));
  EXPECT_FALSE(node_succeeded(0.4 / 3.0, x, 2));
}

TEST(Amplification, FormulaArithmetic) {
  EXPECT_DOUBLE_EQ(node_amplification(1e-4, 100.0, 0.01), 1.0);
  EXPECT_DOUBLE_EQ(amplitude_amplification(0.02, 0.01), 2.0);
  EXPECT_DOUBLE_EQ(node_amplification(1e-14, 1.0, 0.0), 1.0);  // floored budget
}

TEST(ExperimentConfig, Validation) {
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
  auto bad = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.name();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(bad([](ExperimentConfig& c) { c.n_trials = 0; }), "invalid config");
  EXPECT_EQ(bad([](ExperimentConfig& c) { c.srf_sweep.clear(); }), "invalid config");
  EXPECT_EQ(bad([](ExperimentConfig& c) { c.srf_sweep = {0.1}; }), "invalid config");  // h > T
  EXPECT_EQ(bad([](ExperimentConfig& c) { c.quantile = 1.0; }), "invalid config");
  EXPECT_EQ(bad([](ExperimentConfig& c) { c.n_samples = 5; }), "invalid config");
}

TEST(ExperimentConfig, SrfMapsToClusterExtent) {
  const ExperimentConfig c;
  const auto s = c.spec_for_srf(4.0);
  EXPECT_DOUBLE_EQ(1.0 / (c.omega * s.tau * s.h), 4.0);
}

TEST(RunSingleTrial, RecordInvariants) {
  const auto c = small_config();
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto rec = run_single_trial(c, 4.0, seed);
    ASSERT_FALSE(rec.failed) << rec.error;
    ASSERT_EQ(rec.nodes.size(), c.spec.d);
    const double rate = c.epsilon_rule.value * std::pow(c.omega * c.spec.tau * c.spec_for_srf(4.0).h, 3.0);
    EXPECT_LE(rec.epsilon, rate);
    EXPECT_GE(rec.epsilon, rate / 100.0);
    for (const auto& n : rec.nodes) {
      EXPECT_EQ(n.succ, n.e < min_gap_to_others(rec.true_nodes, n.index) / 3.0);
      EXPECT_EQ(n.k_x.has_value(), n.succ);
      EXPECT_EQ(n.k_a.has_value(), n.succ);
      EXPECT_EQ(n.cluster, c.spec.in_cluster(n.index));
    }
  }
}

TEST(RunSingleTrial, NoiselessIsExact) {
  auto c = small_config();
  c.epsilon_rule = {EpsilonRule::Kind::fixed, 0.0};
  const auto rec = run_single_trial(c, 2.0, 5);
  for (const auto& n : rec.nodes) {
    EXPECT_TRUE(n.succ);
    EXPECT_LT(n.e, 1e-8);
  }
}

TEST(RunSingleTrial, Deterministic) {
  const auto c = small_config();
  EXPECT_EQ(run_single_trial(c, 8.0, 77), run_single_trial(c, 8.0, 77));
  EXPECT_NE(run_single_trial(c, 8.0, 77).epsilon, run_single_trial(c, 8.0, 78).epsilon);
}

TEST(RunBatch, SingleTrialBatch) {
  auto c = small_config();
  c.n_trials = 1;
  c.base_seed = 9;
  const auto batch = run_batch(c, 4.0);
  ASSERT_EQ(batch.size(), 1u);
  EXPECT_EQ(batch[0], run_single_trial(c, 4.0, 9));
}

TEST(RunBatch, IndependentOfWorkersAndSplits) {
  auto c = small_config();
  c.n_trials = 20;
  const auto serial = run_batch(c, 4.0);
  c.workers = 4;
  EXPECT_EQ(run_batch(c, 4.0), serial);

  auto first = c;
  first.n_trials = 8;
  auto second = c;
  second.n_trials = 12;
  second.base_seed = c.base_seed + 8;
  auto joined = run_batch(first, 4.0);
  const auto rest = run_batch(second, 4.0);
  joined.insert(joined.end(), rest.begin(), rest.end());
  EXPECT_EQ(joined, serial);
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(serial[i].seed, c.base_seed + i);
}

TEST(RunBatch, WideSeparationAlwaysSucceeds) {
  auto c = small_config();
  c.n_trials = 50;
  c.epsilon_rule = {EpsilonRule::Kind::fixed, 1e-10};
  for (double rate : success_rates(run_batch(c, 2.0))) EXPECT_EQ(rate, 1.0);
}

TEST(SummarizeAmplification, SlopesAndBounds) {
  auto c = small_config();
  c.n_trials = 60;
  c.srf_sweep = {2.0, 4.0, 8.0, 16.0};
  const auto sweep = run_sweep(c);
  const auto summary = summarize_amplification(sweep, 0.5);
  EXPECT_EQ(summary.rows.size(), 8u);
  ASSERT_TRUE(summary.cluster_kx_slope);
  ASSERT_TRUE(summary.cluster_ka_slope);
  EXPECT_NEAR(summary.cluster_kx_slope->slope, 2.0, 0.4);
  EXPECT_NEAR(summary.cluster_ka_slope->slope, 3.0, 0.4);
  EXPECT_LT(summary.noncluster_max_kx, 50.0);
  EXPECT_LT(summary.noncluster_max_ka, 50.0);
  EXPECT_THROW(summarize_amplification(sweep, 0.0), Error);
}

TEST(SummarizeAmplification, AllFailedSrfIsOmittedWithNote) {
  TrialRecord failed;
  failed.seed = 1;
  failed.srf = 3.0;
  failed.failed = true;
  failed.nodes = {NodeOutcome{0, true, INFINITY, false, {}, {}}, NodeOutcome{1, true, INFINITY, false, {}, {}}};
  TrialRecord ok = failed;
  ok.srf = 2.0;
  ok.failed = false;
  ok.nodes = {NodeOutcome{0, true, 1e-3, true, 1.0, 2.0}, NodeOutcome{1, true, 1e-3, true, 3.0, 4.0}};
  const SweepResult sweep{{2.0, {ok}}, {3.0, {failed}}};
  const auto summary = summarize_amplification(sweep, 0.5);
  ASSERT_EQ(summary.rows.size(), 1u);
  EXPECT_EQ(summary.rows[0].median_kx, 2.0);
  EXPECT_EQ(summary.rows[0].median_ka, 3.0);
  EXPECT_FALSE(summary.notes.empty());
  EXPECT_FALSE(summary.cluster_kx_slope);
}
