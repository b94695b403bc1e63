// zo-saddle: run solves, rate ladders and the lemma verification suite.
//
// Exit codes: 0 success, 1 check failure, 2 config error, 3 runtime error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "zo_saddle/config.hpp"
#include "zo_saddle/experiment.hpp"
#include "zo_saddle/verify.hpp"

namespace fs = std::filesystem;
using namespace zo_saddle;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

fs::path output_dir(const ExperimentConfig& cfg, const std::string& override_dir) {
  return override_dir.empty() ? fs::path(cfg.output.dir) : fs::path(override_dir);
}

int cmd_solve(const std::string& path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(path);
  const auto rows = run_sweep(cfg, resolve_threads(cfg.output.threads));
  const fs::path dir = output_dir(cfg, out_dir);
  auto csv = open_output(dir, "runs.csv");
  write_runs_csv(csv, rows);
  auto json = open_output(dir, "report.json");
  json << runs_summary(cfg, rows).dump(2) << '\n';
  for (const auto& r : rows) {
    std::cout << "run " << r.run_id << " seed=" << r.seed << " N=" << r.n_iters
              << " gap=" << (r.final_gap ? format_double(*r.final_gap) : "n/a") << '\n';
  }
  return kOk;
}

int cmd_rate(const std::string& path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(path);
  std::vector<RunRow> rows;
  const auto fits = run_rate(cfg, resolve_threads(cfg.output.threads), &rows);
  const fs::path dir = output_dir(cfg, out_dir);
  auto rates = open_output(dir, "rates.csv");
  write_rates_csv(rates, fits);
  auto runs = open_output(dir, "runs.csv");
  write_runs_csv(runs, rows);
  for (const auto& f : fits) {
    std::cout << (f.ladder == "N" ? "gap-vs-N" : "iterations-vs-1/eps") << " d=" << f.dim
              << " delta=" << format_double(f.delta) << " slope=" << format_double(f.fit->slope)
              << " r2=" << format_double(f.fit->r_squared) << '\n';
  }
  return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::optional<double> amplitude,
               const std::string& out_dir) {
  VerifyOptions opt;
  opt.seed = seed;
  opt.noise_amplitude = amplitude;
  const auto reports = run_verify_suite(suite, opt);
  auto csv = open_output(out_dir.empty() ? fs::path(".") : fs::path(out_dir), "lemma_checks.csv");
  write_lemma_csv(csv, reports);
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.lemma_id << " statistic=" << format_double(r.statistic)
              << " bound=" << format_double(r.bound) << '\n';
    ok = ok && r.pass;
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order mirror descent for stochastic saddle-point problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* solve_cmd = app.add_subcommand("solve", "run the configured solves, write runs.csv and report.json");
  solve_cmd->add_option("config", config_path, "JSON config file")->required();
  solve_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");

  auto* rate_cmd = app.add_subcommand("rate", "run an N- or eps-ladder and fit log-log slopes");
  rate_cmd->add_option("config", config_path, "JSON config file")->required();
  rate_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");

  std::string suite;
  std::uint64_t seed = 7;
  std::optional<double> amplitude;
  auto* verify_cmd = app.add_subcommand("verify", "run a lemma-check suite, write lemma_checks.csv");
  verify_cmd->add_option("suite", suite, "all | inner_product | smoothing | second_moment | bias | tails")
      ->required();
  verify_cmd->add_option("--seed", seed, "root seed");
  verify_cmd->add_option("--noise-amplitude", amplitude,
                         "realized noise amplitude at the reference delta (forces a violation when above it)");
  verify_cmd->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve_cmd) return cmd_solve(config_path, out_dir);
    if (*rate_cmd) return cmd_rate(config_path, out_dir);
    return cmd_verify(suite, seed, amplitude, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const GrowthSpecMissing& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
