#pragma once

// Convex-concave test problems f(x, y, xi) with analytic Lipschitz constants
// and exact duality-gap oracles.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/geometry.hpp"
#include "zo_saddle/rng.hpp"

namespace zo_saddle {

/// (mu_r / 2) ||z - z*||_p^r <= f(x, y*) - f(x*, y).
struct GrowthSpec {
  double r = 2.0;
  double mu_r = 1.0;
};

/// Zero-mean scalar xi scaling a fixed perturbation direction of the payoff.
struct PayoffNoise {
  enum class Kind { None, Uniform, Pareto };

  Kind kind = Kind::None;
  /// Uniform: half-width. Pareto: scale x_m of |xi|.
  double amplitude = 0.0;
  /// Pareto tail index; E|xi|^s is finite iff s < alpha.
  double alpha = 2.0;

  static PayoffNoise none() { return {}; }
  static PayoffNoise uniform(double half_width) {
    detail::require<InvalidArgument>(half_width >= 0.0, "uniform payoff noise: amplitude must be >= 0");
    return {Kind::Uniform, half_width, 2.0};
  }
  /// Symmetric Pareto: xi = sign * x_m * U^{-1/alpha}.
  static PayoffNoise pareto(double scale, double alpha) {
    detail::require<InvalidArgument>(scale > 0.0, "pareto payoff noise: scale must be > 0");
    detail::require<InvalidArgument>(alpha > 1.0, "pareto payoff noise: alpha must be > 1 for a finite mean");
    return {Kind::Pareto, scale, alpha};
  }

  double sample(Rng& rng) const {
    switch (kind) {
      case Kind::None:
        return 0.0;
      case Kind::Uniform:
        return std::uniform_real_distribution<double>(-amplitude, amplitude)(rng);
      case Kind::Pareto: {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double u = 1.0 - unit(rng);  // (0, 1]
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        return sign * amplitude * std::pow(u, -1.0 / alpha);
      }
    }
    return 0.0;
  }

  /// (E |xi|^order)^{1/order}; +inf when the moment does not exist.
  double moment(double order) const {
    switch (kind) {
      case Kind::None:
        return 0.0;
      case Kind::Uniform:
        return amplitude * std::pow(1.0 / (order + 1.0), 1.0 / order);
      case Kind::Pareto:
        if (order >= alpha) return std::numeric_limits<double>::infinity();
        return amplitude * std::pow(alpha / (alpha - order), 1.0 / order);
    }
    return 0.0;
  }

  /// Almost-sure bound on |xi| (+inf for Pareto).
  double sup_abs() const {
    if (kind == Kind::Pareto) return std::numeric_limits<double>::infinity();
    return amplitude;
  }
};

struct SaddleProblem {
  std::string name;
  int dx = 0;
  int dy = 0;
  DomainSpec x_domain;
  std::optional<DomainSpec> y_domain;
  /// f(z, xi) with z = (x, y). Defined on all of R^d.
  std::function<double(const VectorXd&, double)> eval;
  std::function<double(Rng&)> xi_sampler;
  /// sqrt(E M2(xi)^2); +inf when the second moment does not exist.
  double M2 = 0.0;
  /// kappa -> (E M2(xi)^{1+kappa})^{1/(1+kappa)}.
  std::function<double(double)> lipschitz_moment;
  std::optional<VectorXd> solution;
  std::optional<GrowthSpec> growth;
  /// Exact max_y f(x, y) - min_x f(x, y) of the mean objective.
  std::function<double(const VectorXd&)> gap_oracle;

  int dim() const { return dx + dy; }
  double value(const VectorXd& z, double xi) const { return eval(z, xi); }
  /// E_xi f(z, xi); xi enters linearly with zero mean.
  double mean_value(const VectorXd& z) const { return eval(z, 0.0); }
  double sample_xi(Rng& rng) const { return xi_sampler ? xi_sampler(rng) : 0.0; }
  bool has_gap_oracle() const { return static_cast<bool>(gap_oracle); }

  double lipschitz_moment_at(double kappa) const {
    if (lipschitz_moment) return lipschitz_moment(kappa);
    return M2;
  }

  bool contains(const VectorXd& z, double tol = kDomainTol) const {
    if (z.size() != dim()) return false;
    if (!x_domain.contains(z.head(dx), tol)) return false;
    return !y_domain || y_domain->contains(z.tail(dy), tol);
  }

  VectorXd x_of(const VectorXd& z) const { return z.head(dx); }
  VectorXd y_of(const VectorXd& z) const { return z.tail(dy); }
};

inline double duality_gap(const SaddleProblem& p, const VectorXd& z) {
  if (!p.has_gap_oracle()) throw NoGapOracle("problem '" + p.name + "' has no closed-form gap oracle");
  detail::require<DimensionMismatch>(z.size() == p.dim(), "duality_gap: dimension mismatch");
  const double gap = p.gap_oracle(z);
  // Exact closed forms are nonnegative; clip round-off.
  return gap < 0.0 ? 0.0 : gap;
}

inline double spectral_norm(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  return svd.singularValues()(0);
}

/// Unit-spectral-norm perturbation direction drawn from a seeded stream.
inline MatrixXd perturbation_direction(int rows, int cols, std::uint64_t seed) {
  Rng rng = make_stream(seed, "payoff-direction");
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd e(rows, cols);
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    for (Eigen::Index i = 0; i < e.rows(); ++i) e(i, j) = normal(rng);
  }
  return e / spectral_norm(e);
}

namespace detail {

inline void attach_payoff_noise(SaddleProblem& p, const PayoffNoise& noise, double base_lip, double noise_lip) {
  // M2(xi) = base_lip + |xi| * noise_lip bounds the gradient norm for every xi.
  p.M2 = base_lip + noise_lip * noise.moment(2.0);
  p.lipschitz_moment = [noise, base_lip, noise_lip](double kappa) {
    return base_lip + noise_lip * noise.moment(1.0 + kappa);
  };
  if (noise.kind != PayoffNoise::Kind::None) {
    p.xi_sampler = [noise](Rng& rng) { return noise.sample(rng); };
  }
}

/// sup over the simplex of a linear form is the largest coefficient.
inline double best_response_gap_simplex(const MatrixXd& a, const VectorXd& x, const VectorXd& y) {
  const VectorXd col_payoff = a.transpose() * x;
  const VectorXd row_payoff = a * y;
  return col_payoff.maxCoeff() - row_payoff.minCoeff();
}

/// max_{||y|| <= r} <h, y> - mu/2 ||y||^2.
inline double ball_conjugate(const VectorXd& h, double r, double mu) {
  const double n = h.norm();
  if (mu > 0.0 && n / mu <= r) return n * n / (2.0 * mu);
  return r * n - 0.5 * mu * r * r;
}

}  // namespace detail

/// f(x, y, xi) = x^T (A + xi E) y on simplices.
inline SaddleProblem matrix_game(const MatrixXd& a, const PayoffNoise& noise = PayoffNoise::none(),
                                 std::uint64_t direction_seed = 0) {
  detail::require<DimensionMismatch>(a.rows() >= 1 && a.cols() >= 1, "matrix_game: empty payoff matrix");
  detail::require<InvalidArgument>(a.allFinite(), "matrix_game: payoff matrix must be finite");
  SaddleProblem p;
  p.name = "matrix_game";
  p.dx = static_cast<int>(a.rows());
  p.dy = static_cast<int>(a.cols());
  p.x_domain = DomainSpec::simplex(p.dx);
  p.y_domain = DomainSpec::simplex(p.dy);
  const MatrixXd e = noise.kind == PayoffNoise::Kind::None ? MatrixXd::Zero(p.dx, p.dy)
                                                           : perturbation_direction(p.dx, p.dy, direction_seed);
  const int dx = p.dx;
  const int dy = p.dy;
  p.eval = [a, e, dx, dy](const VectorXd& z, double xi) {
    const auto x = z.head(dx);
    const auto y = z.tail(dy);
    double v = x.dot(a * y);
    if (xi != 0.0) v += xi * x.dot(e * y);
    return v;
  };
  // ||grad|| = ||(B y, B^T x)|| <= ||B|| sqrt(||x||^2 + ||y||^2) <= sqrt(2) ||B||.
  detail::attach_payoff_noise(p, noise, std::sqrt(2.0) * spectral_norm(a), std::sqrt(2.0));
  p.gap_oracle = [a, dx, dy](const VectorXd& z) {
    return detail::best_response_gap_simplex(a, z.head(dx), z.tail(dy));
  };
  return p;
}

namespace detail {

inline MatrixXd unit_spectral_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd a(rows, cols);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
  }
  return a / spectral_norm(a);
}

inline VectorXd gaussian_with_norm(int dim, double norm, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(dim);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return norm * v / v.norm();
}

}  // namespace detail

/// Gaussian payoff matrix rescaled to unit spectral norm.
inline SaddleProblem random_matrix_game(int dx, int dy, std::uint64_t seed,
                                        const PayoffNoise& noise = PayoffNoise::none()) {
  detail::require<InvalidArgument>(dx >= 1 && dy >= 1, "random_matrix_game: dimensions must be >= 1");
  Rng rng = make_stream(seed, "payoff-matrix");
  auto p = matrix_game(detail::unit_spectral_gaussian(dx, dy, rng), noise, derive_seed(seed, "payoff-noise", 0));
  p.name = "random_matrix_game";
  return p;
}

/// f(x, y) = x^T A y + b^T x - c^T y + mu/2 ||x||^2 - mu/2 ||y||^2 on origin
/// balls of radii rx, ry. mu > 0 makes the problem strongly monotone (r = 2).
struct BilinearBallSpec {
  MatrixXd A;
  VectorXd b;
  VectorXd c;
  double rx = 1.0;
  double ry = 1.0;
  double mu = 0.0;
};

inline SaddleProblem bilinear_ball_game(const BilinearBallSpec& spec, const PayoffNoise& noise = PayoffNoise::none(),
                                        std::uint64_t direction_seed = 0) {
  const auto& a = spec.A;
  detail::require<DimensionMismatch>(a.rows() >= 1 && a.cols() >= 1, "bilinear_ball_game: empty matrix");
  detail::require<DimensionMismatch>(spec.b.size() == a.rows() && spec.c.size() == a.cols(),
                                     "bilinear_ball_game: b must have A.rows entries and c A.cols entries");
  detail::require<InvalidArgument>(spec.rx > 0.0 && spec.ry > 0.0, "bilinear_ball_game: radii must be > 0");
  detail::require<InvalidArgument>(spec.mu >= 0.0, "bilinear_ball_game: mu must be >= 0");
  SaddleProblem p;
  p.name = "bilinear_ball";
  p.dx = static_cast<int>(a.rows());
  p.dy = static_cast<int>(a.cols());
  p.x_domain = DomainSpec::ball(p.dx, spec.rx);
  p.y_domain = DomainSpec::ball(p.dy, spec.ry);
  const MatrixXd e = noise.kind == PayoffNoise::Kind::None ? MatrixXd::Zero(p.dx, p.dy)
                                                           : perturbation_direction(p.dx, p.dy, direction_seed);
  const int dx = p.dx;
  const int dy = p.dy;
  const VectorXd b = spec.b;
  const VectorXd c = spec.c;
  const double mu = spec.mu;
  p.eval = [a, e, b, c, mu, dx, dy](const VectorXd& z, double xi) {
    const auto x = z.head(dx);
    const auto y = z.tail(dy);
    double v = x.dot(a * y) + b.dot(x) - c.dot(y) + 0.5 * mu * (x.squaredNorm() - y.squaredNorm());
    if (xi != 0.0) v += xi * x.dot(e * y);
    return v;
  };
  const double norm_a = spectral_norm(a);
  const double gx = norm_a * spec.ry + b.norm() + mu * spec.rx;
  const double gy = norm_a * spec.rx + c.norm() + mu * spec.ry;
  const double noise_lip = std::sqrt(spec.rx * spec.rx + spec.ry * spec.ry);
  detail::attach_payoff_noise(p, noise, std::hypot(gx, gy), noise_lip);
  const double rx = spec.rx;
  const double ry = spec.ry;
  p.gap_oracle = [a, b, c, mu, rx, ry, dx, dy](const VectorXd& z) {
    const VectorXd x = z.head(dx);
    const VectorXd y = z.tail(dy);
    const double upper = b.dot(x) + 0.5 * mu * x.squaredNorm() + detail::ball_conjugate(a.transpose() * x - c, ry, mu);
    const double lower = -c.dot(y) - 0.5 * mu * y.squaredNorm() - detail::ball_conjugate(-(a * y + b), rx, mu);
    return upper - lower;
  };
  {
    // Interior stationary point of the monotone field, if unique and feasible.
    const Eigen::Index n = dx + dy;
    MatrixXd jac = MatrixXd::Zero(n, n);
    jac.topLeftCorner(dx, dx) = mu * MatrixXd::Identity(dx, dx);
    jac.topRightCorner(dx, dy) = a;
    jac.bottomLeftCorner(dy, dx) = -a.transpose();
    jac.bottomRightCorner(dy, dy) = mu * MatrixXd::Identity(dy, dy);
    VectorXd rhs(n);
    rhs << -b, -c;
    const Eigen::FullPivLU<MatrixXd> lu(jac);
    if (lu.isInvertible()) {
      const VectorXd zs = lu.solve(rhs);
      if (zs.head(dx).norm() < rx && zs.tail(dy).norm() < ry) {
        p.solution = zs;
        if (mu > 0.0) p.growth = GrowthSpec{2.0, mu};
      }
    }
  }
  return p;
}

inline SaddleProblem bilinear_ball_game(const MatrixXd& a, const VectorXd& b, const VectorXd& c, double rx, double ry) {
  return bilinear_ball_game(BilinearBallSpec{a, b, c, rx, ry, 0.0});
}

/// Bilinear ball game with a unit-spectral-norm Gaussian A and random offsets
/// b, c of norm `offset`, on unit balls.
inline SaddleProblem random_bilinear_ball_game(int dx, int dy, std::uint64_t seed, double offset = 0.5,
                                               const PayoffNoise& noise = PayoffNoise::none()) {
  detail::require<InvalidArgument>(dx >= 1 && dy >= 1, "random_bilinear_ball_game: dimensions must be >= 1");
  detail::require<InvalidArgument>(offset >= 0.0, "random_bilinear_ball_game: offset must be >= 0");
  Rng rng = make_stream(seed, "payoff-matrix");
  BilinearBallSpec spec;
  spec.A = detail::unit_spectral_gaussian(dx, dy, rng);
  spec.b = detail::gaussian_with_norm(dx, offset, rng);
  spec.c = detail::gaussian_with_norm(dy, offset, rng);
  auto p = bilinear_ball_game(spec, noise, derive_seed(seed, "payoff-noise", 0));
  p.name = "random_bilinear_ball_game";
  return p;
}

/// Pure minimization of |x| on [-1, 1] (empty y-block).
inline SaddleProblem abs_problem_1d() {
  SaddleProblem p;
  p.name = "abs_1d";
  p.dx = 1;
  p.dy = 0;
  p.x_domain = DomainSpec::box(VectorXd::Constant(1, -1.0), VectorXd::Constant(1, 1.0));
  p.eval = [](const VectorXd& z, double) { return std::abs(z[0]); };
  p.M2 = 1.0;
  p.solution = VectorXd::Zero(1);
  p.growth = GrowthSpec{1.0, 2.0};
  p.gap_oracle = [](const VectorXd& z) { return std::abs(z[0]); };
  return p;
}

/// Pure minimization of <c, x> on a ball of radius r (empty y-block).
inline SaddleProblem linear_problem(const VectorXd& c, double radius = 1.0) {
  detail::require<InvalidArgument>(c.size() >= 1, "linear_problem: empty coefficient vector");
  SaddleProblem p;
  p.name = "linear";
  p.dx = static_cast<int>(c.size());
  p.dy = 0;
  p.x_domain = DomainSpec::ball(p.dx, radius);
  p.eval = [c](const VectorXd& z, double) { return c.dot(z); };
  p.M2 = c.norm();
  p.gap_oracle = [c, radius](const VectorXd& z) { return c.dot(z) + radius * c.norm(); };
  if (c.norm() > 0.0) p.solution = VectorXd(-radius * c / c.norm());
  return p;
}

/// Pure minimization of ||x - x0||_1 / sqrt(d) on a ball containing x0; M2 = 1.
inline SaddleProblem l1_distance_problem(const VectorXd& x0, double radius) {
  detail::require<InvalidArgument>(x0.size() >= 1, "l1_distance_problem: empty anchor");
  detail::require<InvalidArgument>(x0.norm() <= radius, "l1_distance_problem: anchor must lie in the ball");
  SaddleProblem p;
  p.name = "l1_distance";
  p.dx = static_cast<int>(x0.size());
  p.dy = 0;
  p.x_domain = DomainSpec::ball(p.dx, radius);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.dx));
  p.eval = [x0, scale](const VectorXd& z, double) { return scale * (z - x0).lpNorm<1>(); };
  p.M2 = 1.0;
  p.solution = x0;
  p.gap_oracle = [x0, scale](const VectorXd& z) { return scale * (z - x0).lpNorm<1>(); };
  return p;
}

}  // namespace zo_saddle
