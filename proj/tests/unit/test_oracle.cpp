#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "superres/adversarial.hpp"
#include "superres/error.hpp"
#include "superres/oracle.hpp"

using namespace superres;

namespace {

SpikeSignal unit_spike() { return make_positive_signal(std::vector<double>{1.0}, std::vector<double>{0.0}); }

bool has_warning(const DiameterEstimate& e, const std::string& prefix) {
  for (const auto& w : e.warnings) {
    if (w.starts_with(prefix)) return true;
  }
  return false;
}

}  // namespace

TEST(ErrorSetDiameters, ZeroBudget) {
  const auto f = make_positive_signal(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.3});
  const SearchBox box{{0.01, 0.01}, {0.05, 0.05}};
  const auto e = error_set_diameters(f, 0.0, 1.0, box, 10, 64, 1);
  EXPECT_EQ(e.feasible_count, 1u);
  for (double v : e.per_node_diam) EXPECT_EQ(v, 0.0);
  for (double v : e.per_amp_diam) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(e.warnings.empty());
}

TEST(ErrorSetDiameters, SingleSpikeAnchors) {
  const double eps = 0.1;
  const auto e = error_set_diameters(unit_spike(), eps, 1.0, proportional_box(1, eps, 1.0, {}), 60, 64, 1);
  // s = 0 constrains |a' - 1| <= eps; the grid snaps within one cell.
  EXPECT_NEAR(e.per_amp_diam[0], 2 * eps, e.amp_cell[0] + 1e-12);
  // At a' = 1 the binding frequency is |s| = omega: |e^{-2 pi i dx} - 1| <= eps.
  const double analytic = 2.0 * std::asin(eps / 2.0) / std::numbers::pi;
  EXPECT_NEAR(e.per_node_diam[0], analytic, 0.1 * analytic);
  EXPECT_FALSE(has_warning(e, "feasible set reaches"));
  EXPECT_GT(e.feasible_count, 1u);
}

TEST(ErrorSetDiameters, DiametersGrowWithBudget) {
  const SearchBox box{{0.05}, {0.3}};
  double prev_x = -1.0;
  double prev_a = -1.0;
  for (double eps : {0.01, 0.02, 0.04, 0.08, 0.16}) {
    const auto e = error_set_diameters(unit_spike(), eps, 1.0, box, 40, 64, 1);
    EXPECT_GE(e.per_node_diam[0], prev_x);
    EXPECT_GE(e.per_amp_diam[0], prev_a);
    prev_x = e.per_node_diam[0];
    prev_a = e.per_amp_diam[0];
  }
}

TEST(ErrorSetDiameters, WorkerCountDoesNotChangeResult) {
  const auto f = make_positive_signal(std::vector<double>{1.0, 1.5}, std::vector<double>{-0.4, 0.4});
  const SearchBox box{{0.02, 0.02}, {0.1, 0.1}};
  const auto one = error_set_diameters(f, 0.05, 1.0, box, 12, 32, 1);
  const auto many = error_set_diameters(f, 0.05, 1.0, box, 12, 32, 3);
  EXPECT_EQ(one.per_node_diam, many.per_node_diam);
  EXPECT_EQ(one.per_amp_diam, many.per_amp_diam);
  EXPECT_EQ(one.feasible_count, many.feasible_count);
  EXPECT_EQ(one.candidate_count, many.candidate_count);
}

TEST(ErrorSetDiameters, Warnings) {
  const auto coarse = error_set_diameters(unit_spike(), 1e-6, 1.0, SearchBox{{0.1}, {0.1}}, 4, 64, 1);
  EXPECT_TRUE(has_warning(coarse, "resolution insufficient"));
  const auto small_box = error_set_diameters(unit_spike(), 0.1, 1.0, SearchBox{{0.001}, {0.001}}, 10, 64, 1);
  EXPECT_TRUE(has_warning(small_box, "feasible set reaches"));
}

TEST(ErrorSetDiameters, Preconditions) {
  const auto three = make_positive_signal(std::vector<double>{1, 1, 1}, std::vector<double>{0, 1, 2});
  EXPECT_THROW(error_set_diameters(three, 0.1, 1.0, SearchBox{{0, 0, 0}, {0, 0, 0}}, 10), Error);
  const auto negative = make_real_signal(std::vector<double>{-1.0}, std::vector<double>{0.0});
  EXPECT_THROW(error_set_diameters(negative, 0.1, 1.0, SearchBox{{0.1}, {0.1}}, 10), Error);
  EXPECT_THROW(error_set_diameters(unit_spike(), 0.1, 1.0, SearchBox{{0.1}, {0.1}}, 81), Error);
  EXPECT_THROW(error_set_diameters(unit_spike(), 0.1, 1.0, SearchBox{{0.1, 0.1}, {0.1}}, 10), Error);
}

TEST(DiameterScaling, SingleSpikeSlopes) {
  OracleConfig cfg;
  cfg.workers = 1;
  const auto report = diameter_epsilon_scaling(unit_spike(), 1.0, {0.02, 0.04, 0.08, 0.16}, cfg);
  EXPECT_NEAR(report.node_slopes[0].slope, 1.0, 0.2);
  EXPECT_NEAR(report.amp_slopes[0].slope, 1.0, 0.2);
  EXPECT_THROW(diameter_epsilon_scaling(unit_spike(), 1.0, {0.04, 0.02}, cfg), Error);
}

TEST(DiameterScaling, ScaleIdentity) {
  const auto f = make_positive_signal(std::vector<double>{1.0, 1.5}, std::vector<double>{-0.3, 0.3});
  const double omega = 1.0;
  const double eps = 0.05;
  const int res = 16;
  const SearchBox box{{0.02, 0.02}, {0.12, 0.12}};
  const auto base = error_set_diameters(f, eps, omega, box, res, 64, 1);
  for (double t : {0.5, 2.0}) {
    // SC_T divides positions by T and multiplies the band by T, so the
    // position box shrinks by the same factor.
    const SearchBox scaled_box{{box.node[0] / t, box.node[1] / t}, box.amplitude};
    const auto scaled = error_set_diameters(scale_signal(f, t), eps, omega * t, scaled_box, res, 64, 1);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(scaled.per_node_diam[j] * t, base.per_node_diam[j], 2 * base.node_cell[j] + 1e-12);
      EXPECT_NEAR(scaled.per_amp_diam[j], base.per_amp_diam[j], 2 * base.amp_cell[j] + 1e-12);
    }
  }
}

TEST(ErrorSetDiameters, ConstructorDisplacementIsFeasible) {
  // Pure two-spike cluster: the constructed F_eps is a feasible point, so its
  // displacement cannot exceed the oracle's spread by more than a grid cell.
  const auto f = make_positive_signal(std::vector<double>{1.0, 1.0}, std::vector<double>{-0.25, 0.25});
  const ClusterSpec spec{.d = 2, .p = 2, .h = 0.5, .big_t = 1.0, .tau = 1.0};
  const double eps = 0.02;
  const double omega = 1.0;
  const auto pair = build_adversarial_pair(f, spec, eps, omega);
  const SearchBox box{{2.5 * pair.displacement_x, 2.5 * pair.displacement_x},
                      {2.5 * pair.displacement_a, 2.5 * pair.displacement_a}};
  const auto e = error_set_diameters(f, eps, omega, box, 24, 64, 0);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LE(pair.displacement_x, e.per_node_diam[j] + e.node_cell[j]);
    EXPECT_LE(pair.displacement_a, e.per_amp_diam[j] + e.amp_cell[j]);
  }
}
