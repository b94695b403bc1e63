#pragma once

// Restarted solver under the r-growth condition: every stage halves the
// distance estimate to the saddle point.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/geometry.hpp"
#include "zo_saddle/noise.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/solver.hpp"

namespace zo_saddle {

struct RestartSchedule {
  double r = 2.0;
  double mu_r = 1.0;
  double R0 = 1.0;
  double stage_constant = 4.0;
  int k_stages = 1;
  std::vector<long> budgets;

  long total() const {
    long t = 0;
    for (long n : budgets) t += n;
    return t;
  }

  /// R_{i-1} = R0 2^{-(i-1)} for stage i = 1..k.
  double radius(int stage) const { return R0 * std::ldexp(1.0, -(stage - 1)); }
};

/// k = ceil(log2(mu R0^r / (2 eps)) / r), at least 1.
inline int restart_stage_count(double r, double mu_r, double R0, double eps) {
  detail::require<InvalidArgument>(r >= 1.0 && mu_r > 0.0 && R0 > 0.0 && eps > 0.0,
                                   "restart_stage_count: r >= 1 and positive mu, R0, eps required");
  const double k = std::ceil(std::log2(mu_r * std::pow(R0, r) / (2.0 * eps)) / r);
  return std::max(1, static_cast<int>(k));
}

/// N_1 = ceil(C_r a_q^2 M2^2 d / (mu^2 R0^{2(r-1)})); later stages multiply N_1
/// by 2^{2(i-1)(r-1)}.
inline std::vector<long> restart_stage_budgets(int k_stages, double r, double mu_r, double R0, double a_q_sq,
                                               double m2, int d, double stage_constant) {
  detail::require<InvalidArgument>(k_stages >= 1, "restart budgets: need at least one stage");
  detail::require<InvalidArgument>(std::isfinite(m2) && m2 > 0.0, "restart budgets: M2 must be finite and > 0");
  const double base = stage_constant * a_q_sq * m2 * m2 * d / (mu_r * mu_r * std::pow(R0, 2.0 * (r - 1.0)));
  const double n1 = std::max(1.0, std::ceil(base));
  std::vector<long> out;
  for (int i = 1; i <= k_stages; ++i) {
    const double n = std::ceil(n1 * std::pow(2.0, 2.0 * (i - 1) * (r - 1.0)));
    detail::require<NumericalOverflow>(n < 9.0e18, "restart budgets: stage budget overflows");
    out.push_back(static_cast<long>(n));
  }
  return out;
}

/// R0 = omega-diameter of Z, an upper bound on ||z1 - z*|| that does not use z*.
inline double default_restart_radius(const ProductSetup& setup) { return setup.diameter(); }

inline RestartSchedule make_restart_schedule(const SaddleProblem& problem, const ProductSetup& setup, double eps,
                                             double m2, double stage_constant = 4.0,
                                             std::optional<double> R0 = std::nullopt) {
  if (!problem.growth) throw GrowthSpecMissing("problem '" + problem.name + "' registers no growth condition");
  RestartSchedule s;
  s.r = problem.growth->r;
  s.mu_r = problem.growth->mu_r;
  s.R0 = R0.value_or(default_restart_radius(setup));
  s.stage_constant = stage_constant;
  s.k_stages = restart_stage_count(s.r, s.mu_r, s.R0, eps);
  s.budgets = restart_stage_budgets(s.k_stages, s.r, s.mu_r, s.R0, setup.a_q_sq(), m2, problem.dim(), stage_constant);
  return s;
}

inline RestartSchedule make_restart_schedule(const SaddleProblem& problem, const ProductSetup& setup, double eps) {
  return make_restart_schedule(problem, setup, eps, problem.M2);
}

/// Stage i runs N_i steps with gamma = sqrt(R_{i-1}^2 / 2) / M sqrt(2 / N_i),
/// starting from the averaged iterate of stage i - 1. Stage 1 shares the RNG
/// stream of a plain solve.
inline RunReport restart_solve(const SaddleProblem& problem, const NoiseModel& model, const ProductSetup& setup,
                               const SolverConfig& base, const RestartSchedule& schedule) {
  if (!problem.growth) throw GrowthSpecMissing("problem '" + problem.name + "' registers no growth condition");
  base.validate();
  detail::check_consistent(problem, setup);
  detail::require<ConfigError>(schedule.k_stages >= 1 && static_cast<int>(schedule.budgets.size()) == schedule.k_stages,
                               "restart_solve: schedule budgets do not match k_stages");
  const int d = problem.dim();
  double m = 0.0;
  if (const auto* c1 = std::get_if<step::Case1>(&base.step_rule)) {
    m = m_case1(detail::light_tail_m2(problem, base), d, setup.a_q_sq(), c1->delta_max, base.tau, base.constant);
  } else if (const auto* c2 = std::get_if<step::Case2>(&base.step_rule)) {
    m = m_case2(detail::light_tail_m2(problem, base), d, setup.a_q_sq(), c2->m2_delta, base.constant);
  } else {
    throw ConfigError("restart_solve: base step rule must be case1 or case2");
  }
  detail::require<ConfigError>(m > 0.0, "restart_solve: M must be > 0");

  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.seed = base.seed;
  if (schedule.r < 2.0) report.notes.push_back("growth exponent r < 2: accelerated rate not guaranteed");
  VectorXd z = setup.center();
  long offset = 0;
  for (int i = 1; i <= schedule.k_stages; ++i) {
    const long n = schedule.budgets[static_cast<std::size_t>(i - 1)];
    const double radius = schedule.radius(i);
    const double gamma = std::sqrt(0.5 * radius * radius) / m * std::sqrt(2.0 / static_cast<double>(n));
    z = detail::run_constant_step(problem, model, setup, base, z, gamma, n, static_cast<std::uint64_t>(i - 1), offset,
                                  report);
    offset += n;
  }
  report.z_hat = z;
  if (problem.has_gap_oracle()) report.final_gap = duality_gap(problem, z);
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

enum class NoiseRegime { Bounded, Lipschitz };

/// Bounded: mu^{1/r} eps^{2-1/r} / (M2 sqrt(d)); Lipschitz: mu^{1/r} eps^{1-1/r} / sqrt(d).
inline double improved_noise_threshold(double r, double mu_r, double eps, double m2, int d, NoiseRegime regime) {
  detail::require<InvalidArgument>(r >= 1.0 && mu_r > 0.0 && eps > 0.0 && d >= 1,
                                   "improved_noise_threshold: r >= 1 and positive inputs required");
  const double scale = std::pow(mu_r, 1.0 / r) / std::sqrt(static_cast<double>(d));
  if (regime == NoiseRegime::Lipschitz) return scale * std::pow(eps, 1.0 - 1.0 / r);
  detail::require<InvalidArgument>(m2 > 0.0, "improved_noise_threshold: M2 must be > 0");
  return scale * std::pow(eps, 2.0 - 1.0 / r) / m2;
}

}  // namespace zo_saddle
