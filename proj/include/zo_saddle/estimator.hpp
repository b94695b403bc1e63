#pragma once

// Random directions, the two-point zeroth-order gradient estimator and Monte
// Carlo randomized smoothing.

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/noise.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/rng.hpp"

namespace zo_saddle {

/// Unit vector e with its split into (e_x, e_y).
struct Direction {
  VectorXd e;
  int dx = 0;

  int dim() const { return static_cast<int>(e.size()); }
  int dy() const { return dim() - dx; }
  auto x_block() const { return e.head(dx); }
  auto y_block() const { return e.tail(dy()); }
};

/// e = eta / ||eta||_2 with eta standard Gaussian.
inline Direction sample_sphere(int d, int dx, Rng& rng) {
  detail::require<InvalidArgument>(d >= 1, "sample_sphere: d must be >= 1");
  detail::require<InvalidArgument>(dx >= 0 && dx <= d, "sample_sphere: block split out of range");
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd eta(d);
  double n = 0.0;
  do {
    for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = normal(rng);
    n = eta.norm();
  } while (!(n > 0.0) || !std::isfinite(n));
  return Direction{eta / n, dx};
}

inline Direction sample_sphere(int d, Rng& rng) { return sample_sphere(d, d, rng); }

/// Uniform point of the unit ball: sphere sample scaled by U^{1/d}.
inline VectorXd sample_ball(int d, Rng& rng) {
  const Direction dir = sample_sphere(d, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return dir.e * std::pow(unit(rng), 1.0 / d);
}

/// g = scale * (e_x, -e_y).
struct GradientEstimate {
  VectorXd g;
  double scale = 0.0;
};

/// Two-point estimate for a given direction and xi:
/// g = d / (2 tau) (phi(z + tau e, xi) - phi(z - tau e, xi)) (e_x, -e_y).
inline GradientEstimate estimate_gradient(NoisyOracle& oracle, const VectorXd& z, double tau, const Direction& dir,
                                          double xi) {
  detail::require<InvalidArgument>(tau > 0.0, "estimate_gradient: tau must be > 0");
  detail::require<DimensionMismatch>(z.size() == dir.dim() && z.size() == oracle.problem().dim(),
                                     "estimate_gradient: dimension mismatch");
  const VectorXd plus = z + tau * dir.e;
  const VectorXd minus = z - tau * dir.e;
  const double fp = oracle(plus, xi);
  const double fm = oracle(minus, xi);
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw DomainViolation("estimate_gradient: oracle not finite at the perturbed points");
  }
  const double d = static_cast<double>(dir.dim());
  GradientEstimate out;
  out.scale = d / (2.0 * tau) * (fp - fm);
  out.g = out.scale * dir.e;
  out.g.tail(dir.dy()) *= -1.0;
  return out;
}

/// Samples e, then xi (independently), and returns the two-point estimate.
inline GradientEstimate estimate_gradient(NoisyOracle& oracle, const VectorXd& z, double tau, Rng& rng) {
  const auto& p = oracle.problem();
  const Direction dir = sample_sphere(p.dim(), p.dx, rng);
  const double xi = p.sample_xi(rng);
  return estimate_gradient(oracle, z, tau, dir, xi);
}

inline GradientEstimate estimate_gradient(const SaddleProblem& problem, const NoiseModel& model, const VectorXd& z,
                                          double tau, Rng& rng) {
  NoisyOracle oracle(problem, model);
  return estimate_gradient(oracle, z, tau, rng);
}

/// (g_x, g_y) -> (g_x, -g_y): maps a gradient of f to the saddle descent field.
inline VectorXd descent_field(const VectorXd& grad, int dx) {
  VectorXd out = grad;
  out.tail(grad.size() - dx) *= -1.0;
  return out;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of f^tau(z) = E f(z + tau u), u uniform in the unit ball.
inline McEstimate smooth_value(const SaddleProblem& problem, const VectorXd& z, double tau, long n_samples, Rng& rng) {
  detail::require<InvalidArgument>(tau >= 0.0, "smooth_value: tau must be >= 0");
  detail::require<InvalidArgument>(n_samples >= 1, "smooth_value: need at least one sample");
  if (tau == 0.0) return {problem.mean_value(z), 0.0};
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const double v = problem.mean_value(z + tau * sample_ball(problem.dim(), rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = n_samples > 1 ? m2 / static_cast<double>(n_samples - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

struct McVectorEstimate {
  VectorXd mean;
  VectorXd std_error;
};

/// Monte Carlo estimate of grad f^tau(z) = E[(d / tau) f(z + tau e) e] over the
/// sphere. The zero-mean control variate (d / tau) f(z) e is subtracted.
inline McVectorEstimate smooth_gradient_oracle(const SaddleProblem& problem, const VectorXd& z, double tau,
                                               long n_samples, Rng& rng) {
  detail::require<InvalidArgument>(tau > 0.0, "smooth_gradient_oracle: tau must be > 0");
  detail::require<InvalidArgument>(n_samples >= 2, "smooth_gradient_oracle: need at least two samples");
  const int d = problem.dim();
  const double f0 = problem.mean_value(z);
  VectorXd mean = VectorXd::Zero(d);
  VectorXd m2 = VectorXd::Zero(d);
  for (long i = 0; i < n_samples; ++i) {
    const Direction dir = sample_sphere(d, rng);
    const VectorXd v = (static_cast<double>(d) / tau) * (problem.mean_value(z + tau * dir.e) - f0) * dir.e;
    const VectorXd delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta.cwiseProduct(v - mean);
  }
  VectorXd se = (m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples)).cwiseSqrt();
  return {mean, se};
}

}  // namespace zo_saddle
