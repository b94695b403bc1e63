#pragma once

// Zeroth-order stochastic mirror descent for saddle-point problems with
// gamma-weighted averaging.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/estimator.hpp"
#include "zo_saddle/geometry.hpp"
#include "zo_saddle/noise.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/rng.hpp"

namespace zo_saddle {

enum class Mode { Joint, Separated };

inline std::string to_string(Mode m) { return m == Mode::Joint ? "joint" : "separated"; }

namespace step {
struct Case1 {
  double delta_max = 0.0;
};
struct Case2 {
  double m2_delta = 0.0;
};
struct HeavyTail {
  double kappa = 1.0;
};
struct Manual {
  double gamma = 0.0;
};
}  // namespace step

using StepRule = std::variant<step::Case1, step::Case2, step::HeavyTail, step::Manual>;

struct SolverConfig {
  long n_iters = 1000;
  double tau = 1e-3;
  StepRule step_rule = step::Case1{};
  Mode mode = Mode::Joint;
  bool record_trace = false;
  /// Evaluate the gap of the running average at k = 1, 2, 4, ... and at N.
  bool record_gaps = true;
  std::uint64_t seed = 0;
  /// Constant C hidden inside M_case1 / M_case2.
  double constant = 1.0;
  /// Replaces problem.M2 in the light-tail step rules.
  std::optional<double> m2_override;
  /// Upper estimate of V_{z1}(z*) for the heavy-tail rule; D^2/2 by default.
  std::optional<double> v0;

  void validate() const {
    detail::require<ConfigError>(n_iters >= 1, "solver: n_iters must be >= 1");
    detail::require<ConfigError>(tau > 0.0 && std::isfinite(tau), "solver: tau must be > 0");
    detail::require<ConfigError>(constant > 0.0, "solver: constant must be > 0");
  }
};

struct GapPoint {
  long iter = 0;
  double gap = 0.0;
};

struct RunReport {
  VectorXd z_hat;
  std::optional<double> final_gap;
  std::vector<GapPoint> gap_series;
  /// One entry per constant-step stage (a single entry for solve()).
  std::vector<double> gammas;
  std::vector<long> stage_iters;
  /// Iterates z^1..z^N when record_trace is set.
  std::vector<VectorXd> trace;
  double wall_ms = 0.0;
  long oracle_calls = 0;
  long n_iters = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/// sqrt(C d a_q^2 M2^2 + d^2 a_q^2 Delta^2 / tau^2).
inline double m_case1(double m2, int d, double a_q_sq, double delta_max, double tau, double constant = 1.0) {
  const double dd = static_cast<double>(d);
  return std::sqrt(constant * dd * a_q_sq * m2 * m2 + dd * dd * a_q_sq * delta_max * delta_max / (tau * tau));
}

/// sqrt(C d a_q^2 (M2^2 + M_{2,delta}^2)).
inline double m_case2(double m2, int d, double a_q_sq, double m2_delta, double constant = 1.0) {
  return std::sqrt(constant * static_cast<double>(d) * a_q_sq * (m2 * m2 + m2_delta * m2_delta));
}

inline double step_size_case1(double diameter, double m2, int d, double a_q_sq, double delta_max, double tau, long n,
                              double constant = 1.0) {
  detail::require<InvalidArgument>(n >= 1, "step_size_case1: N must be >= 1");
  const double m = m_case1(m2, d, a_q_sq, delta_max, tau, constant);
  detail::require<InvalidArgument>(m > 0.0, "step_size_case1: M_case1 must be > 0");
  return diameter / m * std::sqrt(2.0 / static_cast<double>(n));
}

inline double step_size_case2(double diameter, double m2, int d, double a_q_sq, double m2_delta, long n,
                              double constant = 1.0) {
  detail::require<InvalidArgument>(n >= 1, "step_size_case2: N must be >= 1");
  const double m = m_case2(m2, d, a_q_sq, m2_delta, constant);
  detail::require<InvalidArgument>(m > 0.0, "step_size_case2: M_case2 must be > 0");
  return diameter / m * std::sqrt(2.0 / static_cast<double>(n));
}

/// M~ for the heavy-tail rule. Bounded noise contributes 2^{1+k} d^{1+k} a Delta^2 / tau^2,
/// Lipschitz noise enters like a second Lipschitz moment.
inline double heavy_tail_m_tilde(double kappa, int d, double a_q_sq, double m2_tilde, double delta_max, double tau,
                                 double m2_delta = 0.0, double constant = 1.0) {
  const double e = 1.0 + kappa;
  const double dd = static_cast<double>(d);
  double m = constant * a_q_sq * std::pow(dd, e / 2.0) * (std::pow(m2_tilde, e) + std::pow(m2_delta, e));
  if (delta_max > 0.0) m += std::pow(2.0, e) * std::pow(dd, e) * a_q_sq * delta_max * delta_max / (tau * tau);
  return std::pow(m, 1.0 / e);
}

/// gamma = ((1 + k) V0 / k)^{1/(1+k)} / M~ * N^{-1/(1+k)}.
inline double step_size_heavy_tail(double kappa, double m_tilde, double v0, long n) {
  detail::require<InvalidArgument>(kappa > 0.0 && kappa <= 1.0, "step_size_heavy_tail: kappa must be in (0, 1]");
  detail::require<InvalidArgument>(m_tilde > 0.0 && v0 > 0.0, "step_size_heavy_tail: M~ and V0 must be > 0");
  detail::require<InvalidArgument>(n >= 1, "step_size_heavy_tail: N must be >= 1");
  const double e = 1.0 + kappa;
  return std::pow(e * v0 / kappa, 1.0 / e) / m_tilde * std::pow(static_cast<double>(n), -1.0 / e);
}

inline double step_size_heavy_tail(const HeavyTailSetup& ht, double m_tilde, double v0, long n) {
  return step_size_heavy_tail(ht.kappa, m_tilde, v0, n);
}

/// Iterations N = ceil(C d a_q^2 M2^2 D^2 / eps^2) sufficient for accuracy eps.
inline long corollary_iterations(double eps, int d, double a_q_sq, double m2, double diameter, double constant = 1.0) {
  detail::require<InvalidArgument>(eps > 0.0, "corollary_iterations: eps must be > 0");
  const double n = std::ceil(constant * d * a_q_sq * m2 * m2 * diameter * diameter / (eps * eps));
  return std::max(1L, static_cast<long>(n));
}

/// Admissible bounded noise eps^2 / (D M2 sqrt(d)).
inline double corollary_delta_threshold(double eps, double diameter, double m2, int d) {
  return eps * eps / (diameter * m2 * std::sqrt(static_cast<double>(d)));
}

/// Admissible Lipschitz noise constant eps / (D sqrt(d)).
inline double corollary_lipschitz_threshold(double eps, double diameter, int d) {
  return eps / (diameter * std::sqrt(static_cast<double>(d)));
}

/// Smoothing radius tau = eps / (2 M2).
inline double corollary_tau(double eps, double m2) { return eps / (2.0 * m2); }

namespace detail {

inline void check_consistent(const SaddleProblem& problem, const ProductSetup& setup) {
  require<ConfigError>(setup.dx() == problem.dx && setup.dy() == problem.dy,
                       "solve: prox setup dimensions do not match the problem");
  require<ConfigError>(problem.dim() >= 1, "solve: empty problem");
  require<ConfigError>(problem.contains(setup.center()), "solve: prox center lies outside the problem domain");
}

inline double light_tail_m2(const SaddleProblem& problem, const SolverConfig& cfg) {
  const double m2 = cfg.m2_override.value_or(problem.M2);
  require<ConfigError>(std::isfinite(m2) && m2 > 0.0,
                       "solve: light-tail step rule needs a finite M2 > 0 (set m2_override)");
  return m2;
}

}  // namespace detail

/// Step size the rule prescribes for a run of `n` iterations.
inline double resolve_step_size(const SaddleProblem& problem, const NoiseModel& model, const ProductSetup& setup,
                                const SolverConfig& cfg, long n) {
  const int d = problem.dim();
  return std::visit(
      [&](const auto& rule) -> double {
        using R = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<R, step::Manual>) {
          detail::require<ConfigError>(rule.gamma >= 0.0, "solve: manual step must be >= 0");
          return rule.gamma;
        } else if constexpr (std::is_same_v<R, step::Case1>) {
          return step_size_case1(setup.diameter(), detail::light_tail_m2(problem, cfg), d, setup.a_q_sq(),
                                 rule.delta_max, cfg.tau, n, cfg.constant);
        } else if constexpr (std::is_same_v<R, step::Case2>) {
          return step_size_case2(setup.diameter(), detail::light_tail_m2(problem, cfg), d, setup.a_q_sq(),
                                 rule.m2_delta, n, cfg.constant);
        } else {
          detail::require<ConfigError>(rule.kappa > 0.0 && rule.kappa <= 1.0, "solve: kappa must be in (0, 1]");
          const double m2t = problem.lipschitz_moment_at(rule.kappa);
          detail::require<ConfigError>(std::isfinite(m2t) && m2t > 0.0,
                                       "solve: the (1+kappa)-th Lipschitz moment must be finite");
          const double m_tilde = heavy_tail_m_tilde(rule.kappa, d, setup.a_q_sq(), m2t, model.delta_max(), cfg.tau,
                                                    model.lipschitz_constant(), cfg.constant);
          const double diam = setup.diameter();
          const double v0 = cfg.v0.value_or(0.5 * diam * diam);
          return step_size_heavy_tail(rule.kappa, m_tilde, v0, n);
        }
      },
      cfg.step_rule);
}

namespace detail {

inline bool is_checkpoint(long k, long n) { return k == n || (k & (k - 1)) == 0; }

/// Runs N steps with constant gamma from z_start and appends to `report`.
/// `iter_offset` shifts checkpoint labels; `stream` selects the RNG stream.
inline VectorXd run_constant_step(const SaddleProblem& problem, const NoiseModel& model, const ProductSetup& setup,
                                  const SolverConfig& cfg, const VectorXd& z_start, double gamma, long n,
                                  std::uint64_t stream, long iter_offset, RunReport& report) {
  Rng rng = make_stream(cfg.seed, "solve", stream);
  NoisyOracle oracle(problem, model);
  const bool gaps = cfg.record_gaps && problem.has_gap_oracle();
  VectorXd z = z_start;
  VectorXd acc = VectorXd::Zero(z.size());
  double weight = 0.0;
  auto average = [&]() -> VectorXd { return weight > 0.0 ? VectorXd(acc / weight) : z_start; };
  for (long k = 1; k <= n; ++k) {
    if (cfg.record_trace) report.trace.push_back(z);
    acc += gamma * z;
    weight += gamma;
    if (gaps && is_checkpoint(k, n)) report.gap_series.push_back({iter_offset + k, duality_gap(problem, average())});
    const GradientEstimate ge = estimate_gradient(oracle, z, cfg.tau, rng);
    z = cfg.mode == Mode::Joint ? joint_prox_step(setup, z, ge.g, gamma) : separated_prox_step(setup, z, ge.g, gamma);
  }
  report.oracle_calls += oracle.calls();
  report.n_iters += n;
  report.gammas.push_back(gamma);
  report.stage_iters.push_back(n);
  return average();
}

}  // namespace detail

/// Algorithm: z^1 = prox center; z^{k+1} = Prox_{z^k}(gamma g^k); returns the
/// gamma-weighted average of z^1..z^N.
inline RunReport solve(const SaddleProblem& problem, const NoiseModel& model, const ProductSetup& setup,
                       const SolverConfig& cfg) {
  cfg.validate();
  detail::check_consistent(problem, setup);
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.seed = cfg.seed;
  const double gamma = resolve_step_size(problem, model, setup, cfg, cfg.n_iters);
  report.z_hat = detail::run_constant_step(problem, model, setup, cfg, setup.center(), gamma, cfg.n_iters, 0, 0, report);
  if (problem.has_gap_oracle()) report.final_gap = duality_gap(problem, report.z_hat);
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace zo_saddle
