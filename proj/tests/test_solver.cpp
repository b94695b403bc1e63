#include <gtest/gtest.h>

#include <cmath>

#include "zo_saddle/metrics.hpp"
#include "zo_saddle/solver.hpp"
#include "zo_saddle/verify.hpp"

using namespace zo_saddle;

namespace {

ProductSetup euclidean_setup(const SaddleProblem& p) {
  return ProductSetup{ProxSetup::euclidean(p.x_domain), ProxSetup::euclidean(*p.y_domain)};
}

SaddleProblem pennies(const PayoffNoise& noise = PayoffNoise::none()) {
  MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  return matrix_game(a, noise);
}

}  // namespace

TEST(StepSize, Case1Arithmetic) {
  EXPECT_DOUBLE_EQ(step_size_case1(1.0, 2.0, 1, 1.0, 0.0, 0.1, 8), 0.25);
}

TEST(StepSize, Case1MonotoneInDelta) {
  double prev = step_size_case1(1.0, 1.0, 3, 1.0, 0.0, 0.1, 100);
  for (double delta : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    const double g = step_size_case1(1.0, 1.0, 3, 1.0, delta, 0.1, 100);
    EXPECT_LT(g, prev);
    prev = g;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(StepSize, DoublingNDividesBySqrt2) {
  const double g1 = step_size_case1(2.0, 1.5, 4, 2.0, 0.01, 0.05, 50);
  const double g2 = step_size_case1(2.0, 1.5, 4, 2.0, 0.01, 0.05, 100);
  EXPECT_NEAR(g1 / g2, std::sqrt(2.0), 1e-12);
}

TEST(StepSize, Case2Arithmetic) {
  EXPECT_DOUBLE_EQ(step_size_case2(1.0, 1.0, 4, 1.0, 0.0, 2), 0.5);
  EXPECT_DOUBLE_EQ(step_size_case2(1.3, 0.7, 5, 2.0, 0.0, 17), step_size_case1(1.3, 0.7, 5, 2.0, 0.0, 1.0, 17));
  const double g4 = step_size_case2(1.0, 1.0, 4, 1.0, 0.2, 10);
  const double g16 = step_size_case2(1.0, 1.0, 16, 1.0, 0.2, 10);
  EXPECT_NEAR(g4 / g16, 2.0, 1e-12);
}

TEST(StepSize, HeavyTailArithmetic) {
  EXPECT_NEAR(step_size_heavy_tail(1.0, 2.0, 1.0, 4), std::sqrt(2.0) / 4.0, 1e-15);
  // kappa = 1 matches sqrt(2 V0) / M~ / sqrt(N).
  EXPECT_NEAR(step_size_heavy_tail(1.0, 3.0, 0.7, 9), std::sqrt(1.4) / 3.0 / 3.0, 1e-15);
  const double kappa = 0.5;
  const double g1 = step_size_heavy_tail(kappa, 1.0, 1.0, 100);
  const double g2 = step_size_heavy_tail(kappa, 1.0, 1.0, 800);
  EXPECT_NEAR(g1 / g2, std::pow(8.0, 1.0 / 1.5), 1e-12);
  EXPECT_THROW(step_size_heavy_tail(0.0, 1.0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(step_size_heavy_tail(1.5, 1.0, 1.0, 1), InvalidArgument);
}

TEST(Solve, SingleIterationReturnsCenter) {
  const auto p = pennies();
  const ProductSetup s{ProxSetup::entropy(2), ProxSetup::entropy(2)};
  SolverConfig cfg;
  cfg.n_iters = 1;
  const auto rep = solve(p, NoiseModel::none(), s, cfg);
  EXPECT_TRUE(rep.z_hat.isApprox(VectorXd::Constant(4, 0.5), 1e-15));
  EXPECT_EQ(rep.oracle_calls, 2);
}

TEST(Solve, ZeroManualStepStaysAtCenter) {
  const auto p = random_bilinear_ball_game(2, 3, 3);
  const auto s = euclidean_setup(p);
  for (long n : {1L, 7L, 300L}) {
    SolverConfig cfg;
    cfg.n_iters = n;
    cfg.step_rule = step::Manual{0.0};
    const auto rep = solve(p, NoiseModel::none(), s, cfg);
    EXPECT_EQ(rep.z_hat, s.center()) << n;
  }
}

TEST(Solve, JointAndSeparatedAgreeForEuclidean) {
  const auto p = random_bilinear_ball_game(3, 2, 8, 0.5, PayoffNoise::uniform(0.5));
  const auto s = euclidean_setup(p);
  SolverConfig cfg;
  cfg.n_iters = 2000;
  cfg.tau = 0.01;
  cfg.seed = 42;
  cfg.record_trace = true;
  cfg.step_rule = step::Manual{0.2};
  const auto joint = solve(p, NoiseModel::none(), s, cfg);
  cfg.mode = Mode::Separated;
  const auto sep = solve(p, NoiseModel::none(), s, cfg);
  ASSERT_EQ(joint.trace.size(), sep.trace.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < joint.trace.size(); ++k) worst = std::max(worst, (joint.trace[k] - sep.trace[k]).norm());
  EXPECT_LE(worst, 1e-12);
}

TEST(Solve, IteratesFeasibleAndAverageMatchesTrace) {
  struct Case {
    SaddleProblem p;
    ProductSetup s;
  };
  const auto mp = pennies();
  const auto bb = random_bilinear_ball_game(2, 2, 11);
  std::vector<Case> cases{{mp, {ProxSetup::entropy(2), ProxSetup::entropy(2)}},
                          {mp, {ProxSetup::euclidean(mp.x_domain), ProxSetup::euclidean(*mp.y_domain)}},
                          {bb, euclidean_setup(bb)},
                          {bb,
                           {ProxSetup::heavy_tail_ball(HeavyTailSetup::make(0.5, 2.0), bb.x_domain),
                            ProxSetup::heavy_tail_ball(HeavyTailSetup::make(0.5, 2.0), *bb.y_domain)}}};
  for (std::size_t c = 0; c < cases.size(); ++c) {
    for (Mode mode : {Mode::Joint, Mode::Separated}) {
      SolverConfig cfg;
      cfg.n_iters = 500;
      cfg.tau = 0.01;
      cfg.seed = 3 + c;
      cfg.mode = mode;
      cfg.record_trace = true;
      cfg.step_rule = step::Manual{0.5};
      const auto rep = solve(cases[c].p, NoiseModel::bounded(0.01, 0.05, cases[c].p.dim(), 2), cases[c].s, cfg);
      ASSERT_EQ(rep.trace.size(), 500u);
      VectorXd avg = VectorXd::Zero(rep.z_hat.size());
      for (const auto& z : rep.trace) {
        EXPECT_TRUE(cases[c].p.contains(z)) << c;
        const VectorXd x = z.head(cases[c].p.dx);
        const VectorXd y = z.tail(cases[c].p.dy);
        EXPECT_LE((cases[c].p.x_domain.project(x) - x).norm(), 1e-9);
        EXPECT_LE((cases[c].p.y_domain->project(y) - y).norm(), 1e-9);
        avg += z;
      }
      avg /= 500.0;
      EXPECT_LE((avg - rep.z_hat).lpNorm<Eigen::Infinity>(), 1e-12) << c;
      EXPECT_EQ(rep.oracle_calls, 1000);
    }
  }
}

TEST(Solve, OracleCallsAreTwicePerStep) {
  const auto p = random_bilinear_ball_game(1, 1, 2);
  for (long n : {1L, 2L, 17L, 1024L}) {
    SolverConfig cfg;
    cfg.n_iters = n;
    EXPECT_EQ(solve(p, NoiseModel::none(), euclidean_setup(p), cfg).oracle_calls, 2 * n);
  }
}

TEST(Solve, DeterministicForFixedSeed) {
  const auto p = random_bilinear_ball_game(2, 2, 5, 0.5, PayoffNoise::uniform(1.0));
  SolverConfig cfg;
  cfg.n_iters = 777;
  cfg.seed = 99;
  cfg.tau = 0.02;
  cfg.step_rule = step::Case1{0.001};
  const auto m = NoiseModel::bounded(0.001, 0.02, 4, 1);
  const auto a = solve(p, m, euclidean_setup(p), cfg);
  const auto b = solve(p, m, euclidean_setup(p), cfg);
  EXPECT_EQ(a.z_hat, b.z_hat);
  EXPECT_EQ(*a.final_gap, *b.final_gap);
  ASSERT_EQ(a.gap_series.size(), b.gap_series.size());
  for (std::size_t i = 0; i < a.gap_series.size(); ++i) EXPECT_EQ(a.gap_series[i].gap, b.gap_series[i].gap);
  EXPECT_EQ(a.gammas, b.gammas);
  cfg.seed = 100;
  EXPECT_NE(solve(p, m, euclidean_setup(p), cfg).z_hat, a.z_hat);
}

TEST(Solve, GapCheckpointsAtPowersOfTwoAndN) {
  const auto p = pennies();
  SolverConfig cfg;
  cfg.n_iters = 100;
  const auto rep = solve(p, NoiseModel::none(), {ProxSetup::entropy(2), ProxSetup::entropy(2)}, cfg);
  std::vector<long> iters;
  for (const auto& g : rep.gap_series) iters.push_back(g.iter);
  EXPECT_EQ(iters, (std::vector<long>{1, 2, 4, 8, 16, 32, 64, 100}));
  EXPECT_DOUBLE_EQ(rep.gap_series.back().gap, *rep.final_gap);
}

TEST(Solve, StepRuleIsTheDocumentedGamma) {
  const auto p = random_bilinear_ball_game(2, 2, 6);
  const auto s = euclidean_setup(p);
  SolverConfig cfg;
  cfg.n_iters = 64;
  cfg.tau = 0.01;
  cfg.step_rule = step::Case1{0.002};
  const auto rep = solve(p, NoiseModel::none(), s, cfg);
  ASSERT_EQ(rep.gammas.size(), 1u);
  EXPECT_DOUBLE_EQ(rep.gammas[0], step_size_case1(s.diameter(), p.M2, 4, s.a_q_sq(), 0.002, 0.01, 64));
}

TEST(Solve, ConfigErrors) {
  const auto p = random_bilinear_ball_game(2, 2, 1);
  const auto s = euclidean_setup(p);
  SolverConfig cfg;
  cfg.n_iters = 0;
  EXPECT_THROW(solve(p, NoiseModel::none(), s, cfg), ConfigError);
  cfg.n_iters = 10;
  cfg.tau = 0.0;
  EXPECT_THROW(solve(p, NoiseModel::none(), s, cfg), ConfigError);
  cfg.tau = 0.01;
  const auto wrong = random_bilinear_ball_game(3, 2, 1);
  EXPECT_THROW(solve(wrong, NoiseModel::none(), s, cfg), ConfigError);
  // Infinite M2 needs an override.
  const auto heavy = random_bilinear_ball_game(2, 2, 1, 0.5, PayoffNoise::pareto(0.2, 1.8));
  EXPECT_THROW(solve(heavy, NoiseModel::none(), s, cfg), ConfigError);
  cfg.m2_override = 3.0;
  EXPECT_NO_THROW(solve(heavy, NoiseModel::none(), s, cfg));
}

// Without payoff noise the iterates can sit exactly on the saddle point.
TEST(Solve, MedianGapDecaysLikeInverseSqrtN) {
  const auto p = pennies(PayoffNoise::uniform(1.0));
  const ProductSetup s{ProxSetup::euclidean(p.x_domain), ProxSetup::euclidean(*p.y_domain)};
  std::vector<std::pair<double, double>> series;
  double prev = 1e9;
  for (long n : {100L, 1000L, 10000L}) {
    std::vector<double> gaps;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SolverConfig cfg;
      cfg.n_iters = n;
      cfg.seed = seed;
      cfg.record_gaps = false;
      gaps.push_back(*solve(p, NoiseModel::none(), s, cfg).final_gap);
    }
    const double med = median(gaps);
    EXPECT_LE(med, prev) << n;
    prev = med;
    series.emplace_back(static_cast<double>(n), med);
  }
  const auto fit = fit_rate(series);
  EXPECT_GE(fit.slope, -0.65);
  EXPECT_LE(fit.slope, -0.35);
}
