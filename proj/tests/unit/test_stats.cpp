#include <gtest/gtest.h>

#include <cmath>

#include "reference.hpp"
#include "superres/error.hpp"
#include "superres/stats.hpp"

using namespace superres;

TEST(FitSlope, ExactPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 3.0, 5.0}) pts.emplace_back(x, x * x);
  const auto fit = fit_slope(pts);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(FitSlope, Constant) {
  std::vector<std::pair<double, double>> pts{{1, 7}, {2, 7}, {4, 7}};
  const auto fit = fit_slope(pts);
  EXPECT_NEAR(fit.slope, 0.0, 1e-15);
  EXPECT_NEAR(std::exp(fit.intercept), 7.0, 1e-12);
  EXPECT_EQ(fit.r_squared, 1.0);
}

TEST(FitSlope, CubicWithJitter) {
  reftest::Gen gen(61);
  std::vector<std::pair<double, double>> pts;
  for (double x = 1.0; x <= 16.0; x *= 1.2) pts.emplace_back(x, x * x * x * (1.0 + gen.uniform(-0.01, 0.01)));
  EXPECT_NEAR(fit_slope(pts).slope, 3.0, 0.05);
}

TEST(FitSlope, Rejections) {
  EXPECT_THROW(fit_slope(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}}), Error);
  EXPECT_THROW(fit_slope(std::vector<std::pair<double, double>>{{-1, 1}, {2, 1}}), Error);
  EXPECT_THROW(fit_slope(std::vector<std::pair<double, double>>{{2, 1}, {2, 3}}), Error);
  EXPECT_THROW(fit_slope(std::vector<std::pair<double, double>>{}), Error);
}

TEST(Quantile, InterpolatesBetweenOrderStatistics) {
  EXPECT_EQ(quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
  EXPECT_EQ(quantile({4.0, 1.0, 2.0, 3.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({0.0, 10.0}, 0.25), 2.5);
  EXPECT_EQ(quantile({5.0}, 0.9), 5.0);
  EXPECT_THROW(quantile({}, 0.5), Error);
  EXPECT_THROW(quantile({1.0}, 1.0), Error);
}
