#include <gtest/gtest.h>

#include <sstream>

#include "zo_saddle/config.hpp"
#include "zo_saddle/experiment.hpp"

using namespace zo_saddle;

namespace {

ExperimentConfig pennies_config(const std::string& extra_sweep = R"({"seeds": [0]})") {
  return parse_config(Json::parse(R"({
    "problem": {"kind": "matching_pennies", "payoff_noise": {"kind": "uniform", "amplitude": 1.0}},
    "solver": {"n_iters": 100, "tau": 0.001},
    "sweep": )" + extra_sweep + "}"));
}

std::string csv(const std::vector<RunRow>& rows) {
  std::ostringstream os;
  write_runs_csv(os, rows);
  return os.str();
}

}  // namespace

TEST(Config, Defaults) {
  const auto cfg = parse_config(Json::object());
  EXPECT_EQ(cfg.problem.kind, "matching_pennies");
  EXPECT_EQ(cfg.noise.kind, "none");
  EXPECT_EQ(cfg.prox.kind, "euclidean");
  EXPECT_EQ(cfg.sweep.seeds, (std::vector<std::uint64_t>{0}));
  EXPECT_DOUBLE_EQ(cfg.restart.stage_constant, 4.0);
  EXPECT_FALSE(cfg.output.record_wall_time);
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    parse_config(Json::parse(R"({"solver": {"taux": 0.1}})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("taux"), std::string::npos);
  }
  EXPECT_THROW(parse_config(Json::parse(R"({"solvr": {}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"problem": {"payoff_noise": {"kind": "uniform", "sigma": 1}}})")),
               ConfigError);
}

TEST(Config, BadValues) {
  EXPECT_THROW(parse_config(Json::parse(R"({"solver": {"tau": -1}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"solver": {"n_iters": "ten"}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"problem": {"kind": "chess"}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"sweep": {"d_grid": [3]}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"sweep": {"seeds": []}})")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, HashIgnoresKeyOrder) {
  const auto a = parse_config(Json::parse(R"({"solver": {"n_iters": 5, "tau": 0.1}, "sweep": {"seeds": [1]}})"));
  const auto b = parse_config(Json::parse(R"({"sweep": {"seeds": [1]}, "solver": {"tau": 0.1, "n_iters": 5}})"));
  const auto c = parse_config(Json::parse(R"({"sweep": {"seeds": [2]}, "solver": {"tau": 0.1, "n_iters": 5}})"));
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_NE(a.hash, c.hash);
  EXPECT_EQ(hash_hex(a.hash).size(), 16u);
}

TEST(Config, BuildsProblems) {
  const auto mp = build_problem(pennies_config().problem);
  EXPECT_EQ(mp.dim(), 4);
  EXPECT_TRUE(mp.has_gap_oracle());
  const auto cfg = parse_config(Json::parse(R"({"problem": {"kind": "bilinear_ball", "dx": 3, "dy": 3, "mu": 1}})"));
  const auto bb = build_problem(cfg.problem);
  EXPECT_EQ(bb.dim(), 6);
  ASSERT_TRUE(bb.growth);
  EXPECT_EQ(build_problem(cfg.problem, 10).dx, 5);
  const auto abs = build_problem(parse_config(Json::parse(R"({"problem": {"kind": "abs_1d"}})")).problem);
  EXPECT_EQ(abs.dim(), 1);
}

TEST(Config, AutoStepRule) {
  const auto base = R"({"problem": {"kind": "random_bilinear_ball"}, "noise": )";
  auto rule_for = [&](const std::string& noise, const std::string& prox) {
    const auto cfg = parse_config(Json::parse(std::string(base) + noise + R"(, "prox": )" + prox + "}"));
    const auto p = build_problem(cfg.problem);
    return step_rule_name(build_solver_config(cfg, p, build_noise(cfg.noise, p), {0, 10, {}, {}}).step_rule);
  };
  EXPECT_EQ(rule_for(R"({"kind": "bounded", "delta": 0.01})", R"({"kind": "euclidean"})"), "case1");
  EXPECT_EQ(rule_for(R"({"kind": "lipschitz", "m2_delta": 0.01})", R"({"kind": "euclidean"})"), "case2");
  EXPECT_EQ(rule_for(R"({"kind": "none"})", R"({"kind": "heavy_tail", "kappa": 0.5})"), "heavy_tail");
}

TEST(Config, TauFromAccuracyTarget) {
  const auto cfg = parse_config(Json::parse(R"({"problem": {"kind": "random_bilinear_ball"}, "solver": {"eps_target": 0.1}})"));
  const auto p = build_problem(cfg.problem);
  const auto sc = build_solver_config(cfg, p, NoiseModel::none(), {0, 10, {}, {}});
  EXPECT_DOUBLE_EQ(sc.tau, 0.1 / (2.0 * p.M2));
}

TEST(Config, EntropyNeedsSimplex) {
  const auto cfg = parse_config(Json::parse(R"({"problem": {"kind": "random_bilinear_ball"}, "prox": {"kind": "entropy"}})"));
  EXPECT_THROW(build_setup(cfg.prox, build_problem(cfg.problem)), ConfigError);
}

TEST(Sweep, ExpansionOrder) {
  const auto cfg = parse_config(Json::parse(R"({"sweep": {"seeds": [1, 2], "n_ladder": [10, 20], "d_grid": [2, 4]}})"));
  const auto pts = expand_sweep(cfg);
  ASSERT_EQ(pts.size(), 8u);
  EXPECT_EQ(pts[0].seed, 1u);
  EXPECT_EQ(pts[1].seed, 2u);
  EXPECT_EQ(pts[2].n_iters, 20);
  EXPECT_EQ(*pts[4].dim, 4);
}

TEST(Sweep, RowsPerSeed) {
  const auto one = run_sweep(pennies_config(), 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(one[0].final_gap.has_value());
  EXPECT_EQ(one[0].oracle_calls, 200);
  const auto three = run_sweep(pennies_config(R"({"seeds": [3, 4, 5]})"), 1);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[0].seed, 3u);
  EXPECT_EQ(three[2].seed, 5u);
  EXPECT_NE(*three[0].final_gap, *three[1].final_gap);
}

TEST(Sweep, CsvIdenticalAcrossRunsAndThreads) {
  const auto cfg = pennies_config(R"({"seeds": [0, 1, 2, 3, 4, 5, 6], "n_ladder": [50, 100, 200]})");
  const std::string a = csv(run_sweep(cfg, 1));
  EXPECT_EQ(a, csv(run_sweep(cfg, 1)));
  EXPECT_EQ(a, csv(run_sweep(cfg, 4)));
  EXPECT_EQ(a.substr(0, a.find('\n')), "run_id,seed,N,tau,delta,regime,final_gap,wall_ms,oracle_calls,config_hash");
}

TEST(Sweep, ThreadOverride) {
  setenv("ZO_SADDLE_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(1), 3);
  setenv("ZO_SADDLE_THREADS", "zero", 1);
  EXPECT_THROW(resolve_threads(1), ConfigError);
  unsetenv("ZO_SADDLE_THREADS");
  EXPECT_EQ(resolve_threads(2), 2);
}

TEST(Sweep, ParallelForRethrows) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw ConfigError("boom");
                            }),
               ConfigError);
}

TEST(Rate, NeedsThreePoints) {
  EXPECT_THROW(run_rate(pennies_config(R"({"seeds": [0], "n_ladder": [100]})"), 1), ConfigError);
}

TEST(Rate, NLadderSlope) {
  const auto cfg = pennies_config(R"({"seeds": [0, 1, 2, 3, 4], "n_ladder": [100, 1000, 10000]})");
  std::vector<RunRow> rows;
  const auto fits = run_rate(cfg, 1, &rows);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_EQ(rows.size(), 15u);
  EXPECT_GE(fits[0].fit->slope, -0.65);
  EXPECT_LE(fits[0].fit->slope, -0.35);
}

TEST(Rate, EpsLadderPlainBudgetIsQuadratic) {
  const auto cfg = parse_config(Json::parse(R"({
    "problem": {"kind": "bilinear_ball", "dx": 1, "dy": 1, "mu": 1},
    "solver": {"n_iters": 1},
    "sweep": {"seeds": [0], "eps_ladder": [0.8, 0.4, 0.2]}})"));
  const auto fits = run_rate(cfg, 1);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_NEAR(fits[0].fit->slope, 2.0, 0.05);
}
