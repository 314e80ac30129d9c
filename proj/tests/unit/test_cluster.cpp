#include <gtest/gtest.h>

#include "reference.hpp"
#include "superres/cluster.hpp"
#include "superres/error.hpp"

using namespace superres;

namespace {

std::string error_name(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.name();
  }
  return "<no error>";
}

}  // namespace

TEST(ClusterSpec, Validation) {
  EXPECT_NO_THROW(ClusterSpec{}.validate());
  auto bad = [](auto mutate) {
    ClusterSpec s;
    mutate(s);
    return error_name([&] { s.validate(); });
  };
  EXPECT_EQ(bad([](ClusterSpec& s) { s.p = 1; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.p = 4; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.h = 0; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.h = 2; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.tau = 1.5; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.eta = 0; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.kappa = 3; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.kappa = 0; }), "invalid cluster spec");
  EXPECT_EQ(bad([](ClusterSpec& s) { s.m_lower = 3; }), "invalid cluster spec");
}

TEST(MakeClusterSignal, MidpointPlacement) {
  const ClusterSpec s{.d = 3, .p = 2, .h = 0.1, .big_t = 1.0, .tau = 0.5, .eta = 0.3};
  const auto f = make_cluster_signal(s, UniformAmplitudes{}, 5);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f.nodes()[0], 0.0);
  EXPECT_DOUBLE_EQ(f.nodes()[1], 0.05);
  EXPECT_DOUBLE_EQ(f.nodes()[2], 0.525);
  for (double a : f.real_amplitudes()) {
    EXPECT_GE(a, s.m_lower);
    EXPECT_LE(a, s.M_upper);
  }
}

TEST(MakeClusterSignal, PureCluster) {
  const ClusterSpec s{.d = 2, .p = 2, .h = 0.1, .big_t = 1.0, .tau = 1.0};
  const auto f = make_cluster_signal(s, FixedAmplitudes{{1.0, 1.5}}, 0);
  EXPECT_EQ(f.nodes(), (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(f.real_amplitudes(), (std::vector<double>{1.0, 1.5}));
}

TEST(MakeClusterSignal, CenteredAndTrailingCluster) {
  const ClusterSpec s{.d = 4, .p = 2, .h = 0.1, .big_t = 2.0, .tau = 1.0, .eta = 0.2, .kappa = 3};
  const auto f = make_cluster_signal(s, UniformAmplitudes{}, 3, true);
  EXPECT_NEAR(f.nodes()[2] + f.nodes()[3], 0.0, 1e-15);
  EXPECT_TRUE(validate_cluster(f.nodes(), s).ok);
  EXPECT_LT(f.nodes()[1], f.nodes()[2]);
}

TEST(MakeClusterSignal, FixedAmplitudesOutsideBounds) {
  const ClusterSpec s{.d = 2, .p = 2};
  EXPECT_EQ(error_name([&] { make_cluster_signal(s, FixedAmplitudes{{0.5, 1.0}}, 0); }), "invalid argument");
  EXPECT_EQ(error_name([&] { make_cluster_signal(s, FixedAmplitudes{{1.0}}, 0); }), "invalid argument");
}

TEST(MakeClusterSignal, InfeasibleGeometryNamesInequality) {
  // Non-cluster nodes cannot be eta*T away from the cluster inside length T.
  const ClusterSpec s{.d = 5, .p = 2, .h = 0.1, .big_t = 1.0, .tau = 1.0, .eta = 0.9};
  try {
    make_cluster_signal(s, UniformAmplitudes{}, 0);
    FAIL() << "expected infeasible geometry";
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "infeasible geometry");
    EXPECT_NE(e.detail().find("eta"), std::string::npos) << e.detail();
  }
}

TEST(ValidateCluster, Examples) {
  const ClusterSpec s{.d = 3, .p = 2, .h = 0.1, .big_t = 1.0, .tau = 0.5, .eta = 0.3};
  EXPECT_TRUE(validate_cluster(std::vector<double>{0.0, 0.05, 0.525}, s).ok);

  const ClusterSpec two{.d = 2, .p = 2, .h = 0.1, .big_t = 1.0, .tau = 0.5};
  const auto wide = validate_cluster(std::vector<double>{0.0, 0.2}, two);
  ASSERT_FALSE(wide.ok);
  EXPECT_NE(wide.violations.front().find("|x2-x1| <= h"), std::string::npos) << wide.violations.front();

  const auto close = validate_cluster(std::vector<double>{0.0, 0.05, 0.06}, s);
  ASSERT_FALSE(close.ok);
  bool saw_ii = false;
  for (const auto& v : close.violations) saw_ii = saw_ii || v.find("condition (ii)") != std::string::npos;
  EXPECT_TRUE(saw_ii);
}

// Generator/validator consistency over random admissible specs.
TEST(MakeClusterSignal, RandomSpecsAlwaysValidate) {
  reftest::Gen gen(31);
  int built = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ClusterSpec s;
    s.d = 2 + gen.index(6);
    s.p = 2 + gen.index(s.d - 1);
    s.big_t = gen.uniform(0.5, 5.0);
    s.tau = gen.uniform(0.05, 1.0) / static_cast<double>(s.p - 1);
    s.eta = gen.uniform(0.01, 1.0);
    s.kappa = 1 + gen.index(s.d - s.p + 1);
    s.m_lower = gen.uniform(0.1, 1.0);
    s.M_upper = s.m_lower + gen.uniform(0.0, 2.0);
    // Keep eta below half a partition cell so the remaining nodes fit.
    if (s.d > s.p) s.eta = std::min(s.eta, 0.4 / static_cast<double>(s.d - s.p));
    s.h = gen.uniform(0.01, 0.5) * s.big_t * s.eta;
    ASSERT_NO_THROW(s.validate()) << "trial " << trial;
    try {
      const auto f = make_cluster_signal(s, UniformAmplitudes{}, trial, trial % 2 == 0);
      const auto report = validate_cluster(f.nodes(), s);
      EXPECT_TRUE(report.ok) << "trial " << trial << ": " << (report.violations.empty() ? "" : report.violations[0]);
      EXPECT_EQ(f.size(), s.d);
      EXPECT_TRUE(f.positive());
      ++built;
    } catch (const Error& e) {
      EXPECT_EQ(e.name(), "infeasible geometry") << "trial " << trial;
    }
  }
  EXPECT_GT(built, 900);
}
