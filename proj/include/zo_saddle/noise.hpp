#pragma once

// Deterministic adversarial perturbations delta(z) of the zeroth-order oracle:
// phi(z, xi) = f(z, xi) + delta(z).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/rng.hpp"

namespace zo_saddle {

enum class NoiseKind { None, Bounded, Lipschitz };

enum class WaveShape { Square, Sine };

inline std::string to_string(WaveShape s) { return s == WaveShape::Sine ? "sine" : "square"; }

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::Bounded: return "bounded";
    case NoiseKind::Lipschitz: return "lipschitz";
  }
  return "unknown";
}

/// Random unit vector of R^d from a seeded stream.
inline VectorXd seeded_unit_vector(int dim, std::uint64_t seed) {
  Rng rng = make_stream(seed, "noise-direction");
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd u(dim);
  do {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
  } while (u.norm() == 0.0);
  return u / u.norm();
}

/// Bounded shapes: square wave delta(z) = A sign(sin((<u, z> - s) / h)) or sine
/// wave delta(z) = A sin((<u, z> - s) / h). The offset s anchors the wave, e.g.
/// a discontinuity on the saddle point.
/// Lipschitz shape: delta(z) = A sin(<u, z> - s), with ||u||_2 = 1.
/// `bound` is the declared Delta (or M_{2,delta}); `amplitude` is the realized
/// A and equals the bound unless deliberately overridden.
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double bound = 0.0;
  double amplitude = 0.0;
  double wavelength = 1.0;
  VectorXd direction;
  double offset = 0.0;
  WaveShape shape = WaveShape::Square;

  static NoiseModel none() { return {}; }

  static NoiseModel bounded(double delta_max, double wavelength, int dim, std::uint64_t seed,
                            WaveShape shape = WaveShape::Square) {
    detail::require<InvalidArgument>(delta_max >= 0.0, "bounded noise: delta must be >= 0");
    detail::require<InvalidArgument>(wavelength > 0.0, "bounded noise: wavelength must be > 0");
    detail::require<InvalidArgument>(dim >= 1, "bounded noise: dim must be >= 1");
    return {NoiseKind::Bounded, delta_max, delta_max, wavelength, seeded_unit_vector(dim, seed), 0.0, shape};
  }

  static NoiseModel lipschitz(double m2_delta, int dim, std::uint64_t seed) {
    detail::require<InvalidArgument>(m2_delta >= 0.0, "lipschitz noise: constant must be >= 0");
    detail::require<InvalidArgument>(dim >= 1, "lipschitz noise: dim must be >= 1");
    return {NoiseKind::Lipschitz, m2_delta, m2_delta, 1.0, seeded_unit_vector(dim, seed), 0.0, WaveShape::Sine};
  }

  /// Same shape with a zero crossing of the wave moved onto `z`.
  NoiseModel anchored_at(const VectorXd& z) const {
    detail::require<DimensionMismatch>(z.size() == direction.size(), "noise: anchor dimension mismatch");
    NoiseModel m = *this;
    m.offset = direction.dot(z);
    return m;
  }

  /// Same shape with a realized amplitude differing from the declared bound.
  NoiseModel with_amplitude(double a) const {
    NoiseModel m = *this;
    m.amplitude = a;
    return m;
  }

  double operator()(const VectorXd& z) const {
    switch (kind) {
      case NoiseKind::None:
        return 0.0;
      case NoiseKind::Bounded: {
        detail::require<DimensionMismatch>(z.size() == direction.size(), "noise: dimension mismatch");
        const double s = std::sin((direction.dot(z) - offset) / wavelength);
        if (shape == WaveShape::Sine) return amplitude * s;
        return s >= 0.0 ? amplitude : -amplitude;
      }
      case NoiseKind::Lipschitz:
        detail::require<DimensionMismatch>(z.size() == direction.size(), "noise: dimension mismatch");
        return amplitude * std::sin(direction.dot(z) - offset);
    }
    return 0.0;
  }

  double delta_max() const { return kind == NoiseKind::Bounded ? bound : 0.0; }
  double lipschitz_constant() const { return kind == NoiseKind::Lipschitz ? bound : 0.0; }
};

/// phi(z, xi) = f(z, xi) + delta(z).
inline double noisy_eval(const SaddleProblem& problem, const NoiseModel& model, const VectorXd& z, double xi) {
  return problem.value(z, xi) + model(z);
}

/// Counts oracle calls made through it.
class NoisyOracle {
 public:
  NoisyOracle(const SaddleProblem& problem, const NoiseModel& model) : problem_(&problem), model_(&model) {}

  double operator()(const VectorXd& z, double xi) {
    ++calls_;
    return noisy_eval(*problem_, *model_, z, xi);
  }

  long calls() const { return calls_; }
  const SaddleProblem& problem() const { return *problem_; }
  const NoiseModel& model() const { return *model_; }

 private:
  const SaddleProblem* problem_;
  const NoiseModel* model_;
  long calls_ = 0;
};

/// Largest realized noise contribution d (delta(z + tau e) - delta(z - tau e)) / (2 tau)
/// over base points z = z0 + t e scanned across several wavelengths.
inline double adversarial_bias_probe(const NoiseModel& model, const VectorXd& direction, double tau,
                                     const VectorXd& z0, int n_grid = 2049) {
  detail::require<InvalidArgument>(tau > 0.0, "bias probe: tau must be > 0");
  detail::require<DimensionMismatch>(direction.size() == z0.size(), "bias probe: dimension mismatch");
  if (model.kind == NoiseKind::None) return 0.0;
  const double d = static_cast<double>(direction.size());
  const double span = 4.0 * std::max({tau, model.wavelength, 1.0});
  double worst = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double t = -span + 2.0 * span * i / (n_grid - 1);
    const VectorXd z = z0 + t * direction;
    const double diff = model(z + tau * direction) - model(z - tau * direction);
    worst = std::max(worst, std::abs(diff) * d / (2.0 * tau));
  }
  return worst;
}

inline double adversarial_bias_probe(const NoiseModel& model, const VectorXd& direction, double tau) {
  return adversarial_bias_probe(model, direction, tau, VectorXd::Zero(direction.size()));
}

}  // namespace zo_saddle
