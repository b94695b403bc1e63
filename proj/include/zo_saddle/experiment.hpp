#pragma once

// Sweep execution and result tables shared by the CLI and the acceptance
// harness. Rows always come back in config order, whatever the worker count.

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "zo_saddle/config.hpp"
#include "zo_saddle/metrics.hpp"
#include "zo_saddle/restarts.hpp"
#include "zo_saddle/solver.hpp"
#include "zo_saddle/verify.hpp"

namespace zo_saddle {

struct RunRow {
  long run_id = 0;
  std::uint64_t seed = 0;
  long n_iters = 0;
  double tau = 0.0;
  double delta = 0.0;
  std::string regime;
  std::optional<double> final_gap;
  double wall_ms = 0.0;
  long oracle_calls = 0;
  std::uint64_t config_hash = 0;
  int dim = 0;
  std::optional<double> eps;
  std::vector<double> gammas;
  std::vector<std::string> notes;
};

/// Worker count: ZO_SADDLE_THREADS when set, else the config value.
inline int resolve_threads(int configured) {
  if (const char* env = std::getenv("ZO_SADDLE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ConfigError("ZO_SADDLE_THREADS must be a positive integer");
    return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1, configured);
}

/// Runs fn(i) for i in [0, n) on `threads` workers; the first exception wins.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  const int count = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(threads)));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::string regime_name(const NoiseModel& model) { return to_string(model.kind); }

/// One solve at a sweep point. With an eps target and restarts enabled the
/// restart schedule replaces the fixed N.
inline RunRow run_point(const ExperimentConfig& cfg, const RunPoint& point, long run_id) {
  const SaddleProblem problem = build_problem(cfg.problem, point.dim);
  const NoiseModel model = build_noise(cfg.noise, problem, point.delta);
  const ProductSetup setup = build_setup(cfg.prox, problem);
  const SolverConfig sc = build_solver_config(cfg, problem, model, point);
  RunReport rep;
  if (cfg.restart.enabled) {
    if (!cfg.solver.eps_target) throw ConfigError("'restart.enabled' needs 'solver.eps_target'");
    const double m2 = cfg.solver.m2_override.value_or(problem.M2);
    const RestartSchedule schedule = make_restart_schedule(problem, setup, *cfg.solver.eps_target, m2,
                                                           cfg.restart.stage_constant, cfg.restart.R0);
    rep = restart_solve(problem, model, setup, sc, schedule);
  } else {
    rep = solve(problem, model, setup, sc);
  }
  RunRow row;
  row.run_id = run_id;
  row.seed = point.seed;
  row.n_iters = rep.n_iters;
  row.tau = sc.tau;
  row.delta = model.bound;
  row.regime = regime_name(model);
  row.final_gap = rep.final_gap;
  row.wall_ms = cfg.output.record_wall_time ? rep.wall_ms : 0.0;
  row.oracle_calls = rep.oracle_calls;
  row.config_hash = cfg.hash;
  row.dim = problem.dim();
  row.eps = cfg.solver.eps_target;
  row.gammas = rep.gammas;
  row.notes = rep.notes;
  return row;
}

inline std::vector<RunRow> run_sweep(const ExperimentConfig& cfg, int threads) {
  const std::vector<RunPoint> points = expand_sweep(cfg);
  std::vector<RunRow> rows(points.size());
  parallel_for(points.size(), threads,
               [&](std::size_t i) { rows[i] = run_point(cfg, points[i], static_cast<long>(i)); });
  return rows;
}

/// %.12g keeps CSV text stable across platforms for identical doubles.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_runs_csv(std::ostream& os, const std::vector<RunRow>& rows) {
  os << "run_id,seed,N,tau,delta,regime,final_gap,wall_ms,oracle_calls,config_hash\n";
  for (const auto& r : rows) {
    os << r.run_id << ',' << r.seed << ',' << r.n_iters << ',' << format_double(r.tau) << ','
       << format_double(r.delta) << ',' << r.regime << ',' << (r.final_gap ? format_double(*r.final_gap) : "")
       << ',' << format_double(r.wall_ms) << ',' << r.oracle_calls << ',' << hash_hex(r.config_hash) << '\n';
  }
}

inline void write_lemma_csv(std::ostream& os, const std::vector<LemmaCheckReport>& reports) {
  os << "lemma_id,n_samples,statistic,bound,margin,pass,seed\n";
  for (const auto& r : reports) {
    os << r.lemma_id << ',' << r.n_samples << ',' << format_double(r.statistic) << ',' << format_double(r.bound)
       << ',' << format_double(r.margin) << ',' << (r.pass ? "true" : "false") << ',' << r.seed << '\n';
  }
}

inline nlohmann::json runs_summary(const ExperimentConfig& cfg, const std::vector<RunRow>& rows) {
  nlohmann::json j;
  j["config_hash"] = hash_hex(cfg.hash);
  j["problem"] = cfg.problem.kind;
  j["prox"] = cfg.prox.kind;
  j["n_runs"] = rows.size();
  std::vector<double> gaps;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json e;
    e["run_id"] = r.run_id;
    e["seed"] = r.seed;
    e["N"] = r.n_iters;
    e["dim"] = r.dim;
    e["gammas"] = r.gammas;
    e["final_gap"] = r.final_gap ? nlohmann::json(*r.final_gap) : nlohmann::json(nullptr);
    if (!r.notes.empty()) e["notes"] = r.notes;
    runs.push_back(e);
    if (r.final_gap) gaps.push_back(*r.final_gap);
  }
  if (!gaps.empty()) {
    j["median_gap"] = median(gaps);
    j["max_gap"] = *std::max_element(gaps.begin(), gaps.end());
  }
  j["runs"] = runs;
  return j;
}

/// Median gap per ladder point and the fitted log-log slope of one group.
struct LadderFit {
  std::string ladder;
  int dim = 0;
  double delta = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> median_gap;
  std::optional<RateFit> fit;
};

namespace detail {

inline std::vector<LadderFit> fit_groups(const std::string& ladder, const std::vector<RunRow>& rows,
                                         double (*x_of)(const RunRow&), double (*y_of)(const RunRow&)) {
  std::map<std::tuple<int, double>, std::map<double, std::pair<std::vector<double>, std::vector<double>>>> groups;
  for (const auto& r : rows) {
    if (!r.final_gap) throw NoGapOracle("rate: problem has no gap oracle");
    auto& cell = groups[{r.dim, r.delta}][x_of(r)];
    cell.first.push_back(y_of(r));
    cell.second.push_back(*r.final_gap);
  }
  std::vector<LadderFit> out;
  for (const auto& [key, cells] : groups) {
    LadderFit lf;
    lf.ladder = ladder;
    lf.dim = std::get<0>(key);
    lf.delta = std::get<1>(key);
    std::vector<std::pair<double, double>> series;
    for (const auto& [x, cell] : cells) {
      lf.x.push_back(x);
      lf.y.push_back(median(cell.first));
      lf.median_gap.push_back(median(cell.second));
      series.emplace_back(x, lf.y.back());
    }
    lf.fit = fit_rate(series);
    out.push_back(std::move(lf));
  }
  return out;
}

}  // namespace detail

/// N-ladder: median gap against N, one fit per (d, delta) group.
/// eps-ladder: total iterations against 1/eps, one fit per group.
inline std::vector<LadderFit> run_rate(const ExperimentConfig& cfg, int threads, std::vector<RunRow>* rows_out = nullptr) {
  const bool n_ladder = cfg.sweep.n_ladder.size() >= 3;
  const bool eps_ladder = cfg.sweep.eps_ladder.size() >= 3;
  if (!n_ladder && !eps_ladder) throw ConfigError("rate: need an n_ladder or eps_ladder with at least 3 points");
  std::vector<LadderFit> fits;
  if (n_ladder) {
    ExperimentConfig c = cfg;
    c.restart.enabled = false;
    auto rows = run_sweep(c, threads);
    auto f = detail::fit_groups(
        "N", rows, [](const RunRow& r) { return static_cast<double>(r.n_iters); },
        [](const RunRow& r) { return *r.final_gap; });
    fits.insert(fits.end(), f.begin(), f.end());
    if (rows_out) rows_out->insert(rows_out->end(), rows.begin(), rows.end());
  }
  if (eps_ladder) {
    std::vector<std::optional<int>> dims;
    for (int d : cfg.sweep.d_grid) dims.emplace_back(d);
    if (dims.empty()) dims.emplace_back(std::nullopt);
    std::vector<RunRow> rows;
    for (const auto& dim : dims) {
      for (double eps : cfg.sweep.eps_ladder) {
        ExperimentConfig c = cfg;
        c.solver.eps_target = eps;
        c.sweep.n_ladder.clear();
        c.sweep.d_grid.clear();
        if (dim) c.sweep.d_grid.push_back(*dim);
        if (!c.restart.enabled) {
          // Plain solver at the corollary budget.
          const SaddleProblem p = build_problem(c.problem, dim);
          const ProductSetup s = build_setup(c.prox, p);
          const double m2 = c.solver.m2_override.value_or(p.M2);
          c.solver.n_iters = corollary_iterations(eps, p.dim(), s.a_q_sq(), m2, s.diameter(), c.solver.constant);
        }
        auto part = run_sweep(c, threads);
        rows.insert(rows.end(), part.begin(), part.end());
      }
    }
    for (long i = 0; i < static_cast<long>(rows.size()); ++i) rows[static_cast<std::size_t>(i)].run_id = i;
    auto f = detail::fit_groups(
        "eps", rows, [](const RunRow& r) { return 1.0 / *r.eps; },
        [](const RunRow& r) { return static_cast<double>(r.n_iters); });
    fits.insert(fits.end(), f.begin(), f.end());
    if (rows_out) rows_out->insert(rows_out->end(), rows.begin(), rows.end());
  }
  return fits;
}

inline void write_rates_csv(std::ostream& os, const std::vector<LadderFit>& fits) {
  os << "ladder,dim,delta,x,y,median_gap,slope,intercept,r_squared\n";
  for (const auto& f : fits) {
    for (std::size_t i = 0; i < f.x.size(); ++i) {
      os << f.ladder << ',' << f.dim << ',' << format_double(f.delta) << ',' << format_double(f.x[i]) << ','
         << format_double(f.y[i]) << ',' << format_double(f.median_gap[i]) << ',' << format_double(f.fit->slope)
         << ',' << format_double(f.fit->intercept) << ',' << format_double(f.fit->r_squared) << '\n';
    }
  }
}

}  // namespace zo_saddle
