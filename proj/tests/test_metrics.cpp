#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "zo_saddle/metrics.hpp"

using namespace zo_saddle;

TEST(FitRate, ExactPowerLaws) {
  for (double slope : {-0.5, -1.0, 0.7, 2.0}) {
    std::vector<std::pair<double, double>> s;
    for (double x : {3.0, 30.0, 300.0, 3000.0, 1e5}) s.emplace_back(x, 1.7 * std::pow(x, slope));
    const auto fit = fit_rate(s);
    EXPECT_LT(std::abs(fit.slope - slope), 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(1.7), 1e-10);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  }
}

TEST(FitRate, TwoOverN) {
  std::vector<std::pair<double, double>> s;
  for (double n : {100.0, 1000.0, 1e4, 1e5}) s.emplace_back(n, 2.0 / n);
  const auto fit = fit_rate(s);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 2.0, 1e-10);
}

TEST(FitRate, ConstantSeries) {
  const auto fit = fit_rate({{1.0, 0.3}, {2.0, 0.3}, {4.0, 0.3}});
  EXPECT_NEAR(fit.slope, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(fit.r_squared, 1.0);
}

TEST(FitRate, Degenerate) {
  EXPECT_THROW(fit_rate({{1.0, 1.0}, {2.0, 2.0}}), DegenerateSeries);
  EXPECT_THROW(fit_rate({{1.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}}), DegenerateSeries);
  EXPECT_THROW(fit_rate({{1.0, 1.0}, {-2.0, 1.0}, {3.0, 1.0}}), DegenerateSeries);
  EXPECT_THROW(fit_rate({{2.0, 1.0}, {2.0, 3.0}, {2.0, 5.0}}), DegenerateSeries);
  EXPECT_THROW(fit_rate({{1.0, 1.0}, {2.0, NAN}, {3.0, 1.0}}), DegenerateSeries);
}

TEST(FitRate, PermutationInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<std::pair<double, double>> s;
  for (int i = 1; i <= 8; ++i) s.emplace_back(std::pow(2.0, i), u(rng) / i);
  const auto ref = fit_rate(s);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(s.begin(), s.end(), rng);
    const auto fit = fit_rate(s);
    EXPECT_NEAR(fit.slope, ref.slope, 1e-12);
    EXPECT_NEAR(fit.intercept, ref.intercept, 1e-12);
    EXPECT_NEAR(fit.r_squared, ref.r_squared, 1e-12);
  }
}

TEST(Quantile, Type7) {
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0, 3.0, 2.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0, 3.0, 2.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0, 3.0, 2.0}, 1.0), 4.0);
  // h = 0.9 * 9 = 8.1
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(i);
  EXPECT_NEAR(quantile(v, 0.9), 8.1, 1e-12);
  EXPECT_DOUBLE_EQ(median({5.0}), 5.0);
  EXPECT_THROW(quantile({}, 0.5), InvalidArgument);
  EXPECT_THROW(quantile({1.0}, 1.5), InvalidArgument);
}

TEST(Plateau, MedianOfTail) {
  std::vector<double> floor;
  for (int i = 0; i < 20; ++i) floor.push_back(std::max(0.1, 1.0 / (1 + i)));
  EXPECT_DOUBLE_EQ(detect_plateau(floor, 8), 0.1);
  EXPECT_DOUBLE_EQ(detect_plateau({9.0, 5.0, 0.4, 0.2, 0.1}, 3), 0.2);
  EXPECT_DOUBLE_EQ(detect_plateau({3.0, 2.5, 2.0}, 1), 2.0);
  EXPECT_THROW(detect_plateau({1.0, 2.0}, 3), SeriesTooShort);
  EXPECT_THROW(detect_plateau({1.0, 2.0}, 0), InvalidArgument);
}
