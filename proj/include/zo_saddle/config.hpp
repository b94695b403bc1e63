#pragma once

// JSON experiment configuration: strict schema, defaults and object builders.
// The schema is documented in docs/config.md.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/geometry.hpp"
#include "zo_saddle/noise.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/rng.hpp"
#include "zo_saddle/solver.hpp"

namespace zo_saddle {

using Json = nlohmann::json;

struct ProblemConfig {
  std::string kind = "matching_pennies";
  int dx = 2;
  int dy = 2;
  std::optional<std::vector<std::vector<double>>> matrix;
  std::vector<double> b;
  std::vector<double> c;
  double rx = 1.0;
  double ry = 1.0;
  double mu = 0.0;
  double offset = 0.5;
  std::uint64_t seed = 0;
  std::string payoff_noise = "none";
  double payoff_amplitude = 0.0;
  double payoff_alpha = 2.0;
};

struct NoiseConfig {
  std::string kind = "none";
  double bound = 0.0;
  std::optional<double> amplitude;
  double wavelength = 1.0;
  std::string shape = "square";
  std::string anchor = "origin";
  std::uint64_t seed = 0;
};

struct ProxConfig {
  std::string kind = "euclidean";
  double kappa = 1.0;
  std::string mode = "joint";
};

struct SolverSection {
  long n_iters = 1000;
  std::optional<double> tau;
  std::optional<double> eps_target;
  std::string step_rule = "auto";
  double gamma = 0.0;
  double constant = 1.0;
  std::optional<double> m2_override;
  std::optional<double> v0;
};

struct SweepConfig {
  std::vector<std::uint64_t> seeds{0};
  std::vector<long> n_ladder;
  std::vector<double> delta_grid;
  std::vector<int> d_grid;
  std::vector<double> eps_ladder;
};

struct RestartConfig {
  bool enabled = false;
  double stage_constant = 4.0;
  std::optional<double> R0;
};

struct OutputConfig {
  std::string dir = ".";
  bool record_wall_time = false;
  int threads = 1;
};

struct ExperimentConfig {
  ProblemConfig problem;
  NoiseConfig noise;
  ProxConfig prox;
  SolverSection solver;
  SweepConfig sweep;
  RestartConfig restart;
  OutputConfig output;
  /// FNV-1a of the canonical (sorted-key) JSON text.
  std::uint64_t hash = 0;
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + (where.empty() ? "top level" : "'" + where + "'"));
    }
  }
}

template <class T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for '" + where + "." + key + "'");
  }
}

template <class T>
void read(const Json& obj, const char* key, std::optional<T>& out, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read(obj, key, v, where);
  out = v;
}

inline void require_one_of(const std::string& value, const std::set<std::string>& options, const std::string& key) {
  if (!options.count(value)) throw ConfigError("bad value '" + value + "' for '" + key + "'");
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  using detail::read;
  detail::reject_unknown(j, "", {"problem", "noise", "prox", "solver", "sweep", "restart", "output"});
  ExperimentConfig cfg;
  if (j.contains("problem")) {
    const Json& p = j.at("problem");
    detail::reject_unknown(p, "problem",
                           {"kind", "dx", "dy", "matrix", "b", "c", "rx", "ry", "mu", "offset", "seed", "payoff_noise"});
    auto& o = cfg.problem;
    read(p, "kind", o.kind, "problem");
    read(p, "dx", o.dx, "problem");
    read(p, "dy", o.dy, "problem");
    read(p, "matrix", o.matrix, "problem");
    read(p, "b", o.b, "problem");
    read(p, "c", o.c, "problem");
    read(p, "rx", o.rx, "problem");
    read(p, "ry", o.ry, "problem");
    read(p, "mu", o.mu, "problem");
    read(p, "offset", o.offset, "problem");
    read(p, "seed", o.seed, "problem");
    if (p.contains("payoff_noise")) {
      const Json& pn = p.at("payoff_noise");
      detail::reject_unknown(pn, "problem.payoff_noise", {"kind", "amplitude", "alpha"});
      read(pn, "kind", o.payoff_noise, "problem.payoff_noise");
      read(pn, "amplitude", o.payoff_amplitude, "problem.payoff_noise");
      read(pn, "alpha", o.payoff_alpha, "problem.payoff_noise");
    }
    detail::require_one_of(o.kind,
                           {"matching_pennies", "matrix_game", "random_matrix_game", "bilinear_ball",
                            "random_bilinear_ball", "abs_1d"},
                           "problem.kind");
    detail::require_one_of(o.payoff_noise, {"none", "uniform", "pareto"}, "problem.payoff_noise.kind");
  }
  if (j.contains("noise")) {
    const Json& n = j.at("noise");
    detail::reject_unknown(n, "noise", {"kind", "delta", "m2_delta", "amplitude", "wavelength", "shape", "anchor", "seed"});
    auto& o = cfg.noise;
    read(n, "kind", o.kind, "noise");
    read(n, "delta", o.bound, "noise");
    read(n, "m2_delta", o.bound, "noise");
    read(n, "amplitude", o.amplitude, "noise");
    read(n, "wavelength", o.wavelength, "noise");
    read(n, "shape", o.shape, "noise");
    read(n, "anchor", o.anchor, "noise");
    read(n, "seed", o.seed, "noise");
    detail::require_one_of(o.kind, {"none", "bounded", "lipschitz"}, "noise.kind");
    detail::require_one_of(o.shape, {"square", "sine"}, "noise.shape");
    detail::require_one_of(o.anchor, {"origin", "solution"}, "noise.anchor");
  }
  if (j.contains("prox")) {
    const Json& x = j.at("prox");
    detail::reject_unknown(x, "prox", {"kind", "kappa", "mode"});
    read(x, "kind", cfg.prox.kind, "prox");
    read(x, "kappa", cfg.prox.kappa, "prox");
    read(x, "mode", cfg.prox.mode, "prox");
    detail::require_one_of(cfg.prox.kind, {"euclidean", "entropy", "heavy_tail"}, "prox.kind");
    detail::require_one_of(cfg.prox.mode, {"joint", "separated"}, "prox.mode");
  }
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    detail::reject_unknown(s, "solver",
                           {"n_iters", "tau", "eps_target", "step_rule", "gamma", "constant", "m2_override", "v0"});
    auto& o = cfg.solver;
    read(s, "n_iters", o.n_iters, "solver");
    read(s, "tau", o.tau, "solver");
    read(s, "eps_target", o.eps_target, "solver");
    read(s, "step_rule", o.step_rule, "solver");
    read(s, "gamma", o.gamma, "solver");
    read(s, "constant", o.constant, "solver");
    read(s, "m2_override", o.m2_override, "solver");
    read(s, "v0", o.v0, "solver");
    detail::require_one_of(o.step_rule, {"auto", "case1", "case2", "heavy_tail", "manual"}, "solver.step_rule");
  }
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    detail::reject_unknown(s, "sweep", {"seeds", "n_ladder", "delta_grid", "d_grid", "eps_ladder"});
    read(s, "seeds", cfg.sweep.seeds, "sweep");
    read(s, "n_ladder", cfg.sweep.n_ladder, "sweep");
    read(s, "delta_grid", cfg.sweep.delta_grid, "sweep");
    read(s, "d_grid", cfg.sweep.d_grid, "sweep");
    read(s, "eps_ladder", cfg.sweep.eps_ladder, "sweep");
    if (cfg.sweep.seeds.empty()) throw ConfigError("'sweep.seeds' must not be empty");
  }
  if (j.contains("restart")) {
    const Json& r = j.at("restart");
    detail::reject_unknown(r, "restart", {"enabled", "stage_constant", "R0"});
    read(r, "enabled", cfg.restart.enabled, "restart");
    read(r, "stage_constant", cfg.restart.stage_constant, "restart");
    read(r, "R0", cfg.restart.R0, "restart");
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    detail::reject_unknown(o, "output", {"dir", "record_wall_time", "threads"});
    read(o, "dir", cfg.output.dir, "output");
    read(o, "record_wall_time", cfg.output.record_wall_time, "output");
    read(o, "threads", cfg.output.threads, "output");
  }
  if (cfg.solver.n_iters < 1) throw ConfigError("'solver.n_iters' must be >= 1");
  if (cfg.solver.tau && !(*cfg.solver.tau > 0.0)) throw ConfigError("'solver.tau' must be > 0");
  if (cfg.solver.eps_target && !(*cfg.solver.eps_target > 0.0)) throw ConfigError("'solver.eps_target' must be > 0");
  if (cfg.output.threads < 1) throw ConfigError("'output.threads' must be >= 1");
  for (long n : cfg.sweep.n_ladder) {
    if (n < 1) throw ConfigError("'sweep.n_ladder' entries must be >= 1");
  }
  for (double e : cfg.sweep.eps_ladder) {
    if (!(e > 0.0)) throw ConfigError("'sweep.eps_ladder' entries must be > 0");
  }
  for (int d : cfg.sweep.d_grid) {
    if (d < 2 || d % 2 != 0) throw ConfigError("'sweep.d_grid' entries must be even and >= 2");
  }
  cfg.hash = fnv1a64(j.dump());
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

inline std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

/// One point of the sweep.
struct RunPoint {
  std::uint64_t seed = 0;
  long n_iters = 0;
  std::optional<double> delta;
  std::optional<int> dim;
};

namespace detail {

inline PayoffNoise make_payoff_noise(const ProblemConfig& p) {
  if (p.payoff_noise == "uniform") return PayoffNoise::uniform(p.payoff_amplitude);
  if (p.payoff_noise == "pareto") return PayoffNoise::pareto(p.payoff_amplitude, p.payoff_alpha);
  return PayoffNoise::none();
}

inline VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ConfigError("'problem.matrix' must be a non-empty list of rows");
  MatrixXd a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ConfigError("'problem.matrix' rows differ in length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return a;
}

}  // namespace detail

inline SaddleProblem build_problem(const ProblemConfig& p, std::optional<int> dim = std::nullopt) {
  const int dx = dim ? *dim / 2 : p.dx;
  const int dy = dim ? *dim - *dim / 2 : p.dy;
  const PayoffNoise noise = detail::make_payoff_noise(p);
  const std::uint64_t dir_seed = derive_seed(p.seed, "payoff-noise", 0);
  if (p.kind == "matching_pennies") {
    MatrixXd a(2, 2);
    a << 1, -1, -1, 1;
    auto prob = matrix_game(a, noise, dir_seed);
    prob.name = "matching_pennies";
    return prob;
  }
  if (p.kind == "matrix_game") {
    if (!p.matrix) throw ConfigError("'problem.matrix' is required for kind matrix_game");
    return matrix_game(detail::to_matrix(*p.matrix), noise, dir_seed);
  }
  if (p.kind == "random_matrix_game") return random_matrix_game(dx, dy, p.seed, noise);
  if (p.kind == "random_bilinear_ball") return random_bilinear_ball_game(dx, dy, p.seed, p.offset, noise);
  if (p.kind == "bilinear_ball") {
    BilinearBallSpec spec;
    spec.A = p.matrix ? detail::to_matrix(*p.matrix) : MatrixXd(MatrixXd::Identity(dx, dy));
    spec.b = p.b.empty() ? VectorXd(VectorXd::Zero(spec.A.rows())) : detail::to_vector(p.b);
    spec.c = p.c.empty() ? VectorXd(VectorXd::Zero(spec.A.cols())) : detail::to_vector(p.c);
    spec.rx = p.rx;
    spec.ry = p.ry;
    spec.mu = p.mu;
    return bilinear_ball_game(spec, noise, dir_seed);
  }
  return abs_problem_1d();
}

inline NoiseModel build_noise(const NoiseConfig& n, const SaddleProblem& problem, std::optional<double> delta = {}) {
  if (n.kind == "none") return NoiseModel::none();
  const double bound = delta.value_or(n.bound);
  NoiseModel m = n.kind == "bounded"
                     ? NoiseModel::bounded(bound, n.wavelength, problem.dim(), n.seed,
                                           n.shape == "sine" ? WaveShape::Sine : WaveShape::Square)
                     : NoiseModel::lipschitz(bound, problem.dim(), n.seed);
  if (n.anchor == "solution") {
    if (!problem.solution) throw ConfigError("'noise.anchor' = solution needs a problem with a known solution");
    m = m.anchored_at(*problem.solution);
  }
  if (n.amplitude) m = m.with_amplitude(*n.amplitude);
  return m;
}

inline ProxSetup build_block_setup(const ProxConfig& x, const DomainSpec& domain) {
  if (x.kind == "entropy") {
    if (!domain.is_simplex()) throw ConfigError("entropy prox needs simplex domains");
    return ProxSetup::entropy(domain.dim());
  }
  if (x.kind == "heavy_tail") {
    if (!domain.is_ball()) throw ConfigError("heavy_tail prox needs ball domains");
    return ProxSetup::heavy_tail_ball(HeavyTailSetup::make(x.kappa, 2.0), domain);
  }
  return ProxSetup::euclidean(domain);
}

inline ProductSetup build_setup(const ProxConfig& x, const SaddleProblem& problem) {
  ProductSetup s{build_block_setup(x, problem.x_domain), std::nullopt};
  if (problem.y_domain) s.y = build_block_setup(x, *problem.y_domain);
  return s;
}

/// Solver settings for one sweep point. tau defaults to eps / (2 M2) when an
/// accuracy target is given, else 1e-3.
inline SolverConfig build_solver_config(const ExperimentConfig& cfg, const SaddleProblem& problem,
                                        const NoiseModel& model, const RunPoint& point) {
  SolverConfig s;
  s.n_iters = point.n_iters;
  const double m2 = cfg.solver.m2_override.value_or(problem.M2);
  if (cfg.solver.tau) {
    s.tau = *cfg.solver.tau;
  } else if (cfg.solver.eps_target && std::isfinite(m2) && m2 > 0.0) {
    s.tau = corollary_tau(*cfg.solver.eps_target, m2);
  } else {
    s.tau = 1e-3;
  }
  s.mode = cfg.prox.mode == "separated" ? Mode::Separated : Mode::Joint;
  s.seed = point.seed;
  s.constant = cfg.solver.constant;
  s.m2_override = cfg.solver.m2_override;
  s.v0 = cfg.solver.v0;
  std::string rule = cfg.solver.step_rule;
  if (rule == "auto") {
    if (cfg.prox.kind == "heavy_tail") {
      rule = "heavy_tail";
    } else {
      rule = model.kind == NoiseKind::Lipschitz ? "case2" : "case1";
    }
  }
  if (rule == "case1") {
    s.step_rule = step::Case1{model.delta_max()};
  } else if (rule == "case2") {
    s.step_rule = step::Case2{model.lipschitz_constant()};
  } else if (rule == "heavy_tail") {
    s.step_rule = step::HeavyTail{cfg.prox.kappa};
  } else {
    s.step_rule = step::Manual{cfg.solver.gamma};
  }
  return s;
}

inline std::string step_rule_name(const StepRule& r) {
  switch (r.index()) {
    case 0: return "case1";
    case 1: return "case2";
    case 2: return "heavy_tail";
    default: return "manual";
  }
}

/// Cartesian product of the sweep axes in fixed order: d, delta, N, seed.
inline std::vector<RunPoint> expand_sweep(const ExperimentConfig& cfg) {
  std::vector<std::optional<int>> dims;
  for (int d : cfg.sweep.d_grid) dims.emplace_back(d);
  if (dims.empty()) dims.emplace_back(std::nullopt);
  std::vector<std::optional<double>> deltas;
  for (double d : cfg.sweep.delta_grid) deltas.emplace_back(d);
  if (deltas.empty()) deltas.emplace_back(std::nullopt);
  std::vector<long> ns = cfg.sweep.n_ladder;
  if (ns.empty()) ns.push_back(cfg.solver.n_iters);
  std::vector<RunPoint> out;
  for (const auto& d : dims) {
    for (const auto& delta : deltas) {
      for (long n : ns) {
        for (std::uint64_t seed : cfg.sweep.seeds) out.push_back({seed, n, delta, d});
      }
    }
  }
  return out;
}

}  // namespace zo_saddle
