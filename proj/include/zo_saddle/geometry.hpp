#pragma once

// Proximal setups: domains, prox-functions, Bregman divergences, prox maps
// and omega-diameters for a single block and for the product Z = X x Y.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zo_saddle/errors.hpp"

namespace zo_saddle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Absolute tolerance for domain membership.
inline constexpr double kDomainTol = 1e-9;
/// Mass floor keeping entropy iterates in the interior of the simplex.
inline constexpr double kSimplexFloor = 1e-12;
/// Constant C in a_inf^2 = min{1, C * max(1, ln d) / d}.
inline constexpr double kSphereMomentConstant = 2.0;

struct EuclideanBall {
  VectorXd center;
  double radius = 1.0;
};

struct Simplex {
  int dim = 1;
};

struct Box {
  VectorXd lo;
  VectorXd hi;
};

class DomainSpec {
 public:
  using Kind = std::variant<EuclideanBall, Simplex, Box>;

  DomainSpec() : DomainSpec(Simplex{1}) {}

  explicit DomainSpec(Kind kind) : kind_(std::move(kind)) { validate(); }

  static DomainSpec ball(VectorXd center, double radius) {
    return DomainSpec(EuclideanBall{std::move(center), radius});
  }
  static DomainSpec ball(int dim, double radius) {
    return ball(VectorXd::Zero(dim), radius);
  }
  static DomainSpec simplex(int dim) { return DomainSpec(Simplex{dim}); }
  static DomainSpec box(VectorXd lo, VectorXd hi) {
    return DomainSpec(Box{std::move(lo), std::move(hi)});
  }

  const Kind& kind() const { return kind_; }
  bool is_ball() const { return std::holds_alternative<EuclideanBall>(kind_); }
  bool is_simplex() const { return std::holds_alternative<Simplex>(kind_); }
  bool is_box() const { return std::holds_alternative<Box>(kind_); }
  const EuclideanBall& as_ball() const { return std::get<EuclideanBall>(kind_); }
  const Box& as_box() const { return std::get<Box>(kind_); }

  int dim() const {
    return std::visit(
        [](const auto& k) -> int {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, EuclideanBall>) {
            return static_cast<int>(k.center.size());
          } else if constexpr (std::is_same_v<T, Simplex>) {
            return k.dim;
          } else {
            return static_cast<int>(k.lo.size());
          }
        },
        kind_);
  }

  bool bounded() const {
    if (is_ball()) return std::isfinite(as_ball().radius);
    if (is_box()) return as_box().lo.allFinite() && as_box().hi.allFinite();
    return true;
  }

  /// Point minimizing the distance-generating function of the domain.
  VectorXd center() const {
    if (is_ball()) return as_ball().center;
    if (is_box()) return 0.5 * (as_box().lo + as_box().hi);
    return VectorXd::Constant(dim(), 1.0 / dim());
  }

  /// Largest Euclidean norm of a point in the domain.
  double max_norm() const {
    if (is_ball()) return as_ball().center.norm() + as_ball().radius;
    if (is_box()) {
      const auto& b = as_box();
      return b.lo.cwiseAbs().cwiseMax(b.hi.cwiseAbs()).norm();
    }
    return 1.0;
  }

  bool contains(const VectorXd& z, double tol = kDomainTol) const {
    if (z.size() != dim() || !z.allFinite()) return false;
    if (is_ball()) {
      const auto& b = as_ball();
      return (z - b.center).norm() <= b.radius + tol;
    }
    if (is_box()) {
      const auto& b = as_box();
      return ((z - b.lo).array() >= -tol).all() && ((b.hi - z).array() >= -tol).all();
    }
    return (z.array() >= -tol).all() && std::abs(z.sum() - 1.0) <= tol;
  }

  /// Euclidean projection onto the domain.
  VectorXd project(const VectorXd& z) const {
    if (is_ball()) {
      const auto& b = as_ball();
      VectorXd shift = z - b.center;
      const double n = shift.norm();
      if (n <= b.radius) return z;
      return b.center + shift * (b.radius / n);
    }
    if (is_box()) {
      const auto& b = as_box();
      return z.cwiseMax(b.lo).cwiseMin(b.hi);
    }
    return project_simplex(z);
  }

  static VectorXd project_simplex(const VectorXd& z) {
    const Eigen::Index n = z.size();
    std::vector<double> u(z.data(), z.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      cumsum += u[j];
      const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
      if (u[j] - t > 0.0) theta = t;
    }
    return (z.array() - theta).cwiseMax(0.0).matrix();
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, EuclideanBall>) {
            detail::require<InvalidArgument>(k.center.size() >= 1, "ball: dim must be >= 1");
            detail::require<InvalidArgument>(k.radius > 0.0, "ball: radius must be > 0");
          } else if constexpr (std::is_same_v<T, Simplex>) {
            detail::require<InvalidArgument>(k.dim >= 1, "simplex: dim must be >= 1");
          } else {
            detail::require<InvalidArgument>(k.lo.size() >= 1 && k.lo.size() == k.hi.size(),
                                             "box: bounds must have equal positive size");
            detail::require<InvalidArgument>((k.lo.array() < k.hi.array()).all(),
                                             "box: lo < hi required componentwise");
          }
        },
        kind_);
  }

  Kind kind_;
};

/// Parameters of the uniformly convex prox-function used under infinite noise
/// variance: omega(x) = K_q^{1/kappa} kappa/(1+kappa) ||x||_p^{(1+kappa)/kappa}.
struct HeavyTailSetup {
  double kappa = 1.0;
  double q_exp = 2.0;

  static HeavyTailSetup make(double kappa, double q_exp) {
    detail::require<InvalidArgument>(kappa > 0.0 && kappa <= 1.0, "heavy tail: kappa must lie in (0, 1]");
    detail::require<InvalidArgument>(q_exp >= 1.0 + kappa, "heavy tail: q must be >= 1 + kappa");
    return HeavyTailSetup{kappa, q_exp};
  }

  double K_q() const { return 10.0 * std::max(1.0, std::pow(q_exp - 1.0, (1.0 + kappa) / 2.0)); }
  /// Dual exponent p with 1/p + 1/q = 1.
  double p_exp() const { return std::isinf(q_exp) ? 1.0 : q_exp / (q_exp - 1.0); }
  /// Multiplier K_q^{1/kappa} kappa/(1+kappa).
  double coefficient() const { return std::pow(K_q(), 1.0 / kappa) * kappa / (1.0 + kappa); }
  /// Power (1+kappa)/kappa, always >= 2.
  double power() const { return (1.0 + kappa) / kappa; }
};

enum class ProxKind { Euclidean, Entropy, HeavyTail };

inline std::string to_string(ProxKind k) {
  switch (k) {
    case ProxKind::Euclidean: return "euclidean";
    case ProxKind::Entropy: return "entropy";
    case ProxKind::HeavyTail: return "heavy_tail";
  }
  return "unknown";
}

/// sqrt(E ||e||_q^4) bound for e uniform on the unit sphere of R^d.
inline double sphere_moment_constant(int p_norm, int d) {
  detail::require<InvalidArgument>(d >= 1, "sphere moment: d must be >= 1");
  if (p_norm == 2) return 1.0;
  const double logd = std::max(1.0, std::log(static_cast<double>(d)));
  return std::min(1.0, kSphereMomentConstant * logd / d);
}

namespace detail {

inline double lp_norm(const VectorXd& v, double p) {
  if (p == 2.0) return v.norm();
  if (p == 1.0) return v.lpNorm<1>();
  if (std::isinf(p)) return v.lpNorm<Eigen::Infinity>();
  return std::pow(v.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

}  // namespace detail

/// Heavy-tail prox-function value omega(x), measured from the origin.
inline double heavy_tail_omega(const HeavyTailSetup& ht, const VectorXd& u) {
  const double n = detail::lp_norm(u, ht.p_exp());
  if (n == 0.0) return 0.0;
  return ht.coefficient() * std::pow(n, ht.power());
}

/// A norm / prox-function pair on one block.
struct ProxSetup {
  ProxKind kind = ProxKind::Euclidean;
  int p_norm = 2;
  DomainSpec domain;
  double a_q_sq = 1.0;
  double diameter = 0.0;
  std::optional<HeavyTailSetup> heavy_tail;

  int dim() const { return domain.dim(); }

  /// omega(z) = 1/2 ||z - c||_2^2 with c the domain center.
  static ProxSetup euclidean(DomainSpec domain);
  /// omega(z) = sum z_i ln z_i on the simplex; norm l1.
  static ProxSetup entropy(int dim);
  /// Heavy-tail prox-function on a Euclidean ball, measured from its center.
  static ProxSetup heavy_tail_ball(const HeavyTailSetup& ht, DomainSpec ball);
};

inline double omega_diameter(const ProxSetup& s);

inline ProxSetup ProxSetup::euclidean(DomainSpec domain) {
  ProxSetup s;
  s.kind = ProxKind::Euclidean;
  s.p_norm = 2;
  s.domain = std::move(domain);
  s.a_q_sq = 1.0;
  s.diameter = omega_diameter(s);
  return s;
}

inline ProxSetup ProxSetup::entropy(int dim) {
  detail::require<InvalidArgument>(dim >= 2, "entropy setup: simplex dim must be >= 2");
  ProxSetup s;
  s.kind = ProxKind::Entropy;
  s.p_norm = 1;
  s.domain = DomainSpec::simplex(dim);
  s.a_q_sq = sphere_moment_constant(1, dim);
  s.diameter = omega_diameter(s);
  return s;
}

inline ProxSetup ProxSetup::heavy_tail_ball(const HeavyTailSetup& ht, DomainSpec ball) {
  detail::require<InvalidArgument>(ball.is_ball(), "heavy-tail setup requires a Euclidean ball domain");
  ProxSetup s;
  s.kind = ProxKind::HeavyTail;
  s.heavy_tail = HeavyTailSetup::make(ht.kappa, ht.q_exp);
  s.p_norm = 2;
  s.domain = std::move(ball);
  s.a_q_sq = 1.0;
  s.diameter = omega_diameter(s);
  return s;
}

/// omega-diameter max sqrt(2 V_z(v)) over the domain. For the entropy setup the
/// ln d convention is used (the supremum over the open simplex is infinite).
inline double omega_diameter(const ProxSetup& s) {
  if (!s.domain.bounded()) throw UnboundedDomain("diameter: domain is unbounded");
  const auto& dom = s.domain;
  switch (s.kind) {
    case ProxKind::Euclidean:
      if (dom.is_ball()) return 2.0 * dom.as_ball().radius;
      if (dom.is_box()) return (dom.as_box().hi - dom.as_box().lo).norm();
      return std::sqrt(2.0);
    case ProxKind::Entropy:
      return std::sqrt(2.0 * std::log(static_cast<double>(dom.dim())));
    case ProxKind::HeavyTail: {
      // V is maximal for antipodal boundary points: V = 2 c s R^s.
      const auto& ht = *s.heavy_tail;
      const double r = dom.as_ball().radius;
      return std::sqrt(4.0 * ht.coefficient() * ht.power() * std::pow(r, ht.power()));
    }
  }
  return 0.0;
}

inline double diameter(const ProxSetup& s) { return omega_diameter(s); }

inline VectorXd prox_center(const ProxSetup& s) { return s.domain.center(); }

inline double prox_function(const ProxSetup& s, const VectorXd& z) {
  switch (s.kind) {
    case ProxKind::Euclidean:
      return 0.5 * (z - s.domain.center()).squaredNorm();
    case ProxKind::Entropy: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (z[i] > 0.0) acc += z[i] * std::log(z[i]);
      }
      return acc;
    }
    case ProxKind::HeavyTail:
      return heavy_tail_omega(*s.heavy_tail, z - s.domain.center());
  }
  return 0.0;
}

inline VectorXd prox_gradient(const ProxSetup& s, const VectorXd& z) {
  switch (s.kind) {
    case ProxKind::Euclidean:
      return z - s.domain.center();
    case ProxKind::Entropy:
      return (z.array().max(kSimplexFloor).log() + 1.0).matrix();
    case ProxKind::HeavyTail: {
      const auto& ht = *s.heavy_tail;
      detail::require<InvalidArgument>(ht.q_exp == 2.0, "heavy-tail gradient implemented for q = 2 only");
      VectorXd u = z - s.domain.center();
      const double n = u.norm();
      if (n == 0.0) return VectorXd::Zero(z.size());
      return ht.coefficient() * ht.power() * std::pow(n, ht.power() - 2.0) * u;
    }
  }
  return {};
}

/// Heavy-tail prox-function value; p taken from the setup's q exponent.
inline double heavy_tail_prox_value(const HeavyTailSetup& ht, const ProxSetup& setup, const VectorXd& x) {
  const auto checked = HeavyTailSetup::make(ht.kappa, ht.q_exp);
  detail::require<DimensionMismatch>(x.size() == setup.dim(), "heavy_tail_prox_value: dimension mismatch");
  return heavy_tail_omega(checked, x - setup.domain.center());
}

/// V_z(v) = omega(z) - omega(v) - <grad omega(v), z - v>.
inline double bregman(const ProxSetup& s, const VectorXd& z, const VectorXd& v) {
  detail::require<DimensionMismatch>(z.size() == s.dim() && v.size() == s.dim(), "bregman: dimension mismatch");
  if (!s.domain.contains(z)) throw DomainViolation("bregman: z outside the domain");
  if (!s.domain.contains(v)) throw DomainViolation("bregman: v outside the domain");
  switch (s.kind) {
    case ProxKind::Euclidean:
      return 0.5 * (z - v).squaredNorm();
    case ProxKind::Entropy: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double zi = std::max(z[i], 0.0);
        const double vi = std::max(v[i], kSimplexFloor);
        if (zi > 0.0) acc += zi * std::log(zi / vi);
        acc += vi - zi;
      }
      return std::max(acc, 0.0);
    }
    case ProxKind::HeavyTail: {
      const double val = prox_function(s, z) - prox_function(s, v) - prox_gradient(s, v).dot(z - v);
      return std::max(val, 0.0);
    }
  }
  return 0.0;
}

namespace detail {

/// Blocks of a heavy-tail prox over a product of balls sharing one radial
/// prox-function c * ||u||^s. Solves argmin_v omega(v) - <w, v> over the
/// product by bisection on the joint radius rho.
struct RadialBlock {
  VectorXd w;
  double radius;
};

inline std::vector<VectorXd> heavy_tail_radial_argmin(const HeavyTailSetup& ht,
                                                      const std::vector<RadialBlock>& blocks) {
  const double c = ht.coefficient();
  const double s = ht.power();
  double rho_max_sq = 0.0;
  double wnorm_sq = 0.0;
  for (const auto& b : blocks) {
    rho_max_sq += b.radius * b.radius;
    wnorm_sq += b.w.squaredNorm();
  }
  std::vector<VectorXd> out;
  out.reserve(blocks.size());
  if (wnorm_sq == 0.0) {
    for (const auto& b : blocks) out.push_back(VectorXd::Zero(b.w.size()));
    return out;
  }
  // For a trial radius rho the multiplier is lambda = c s rho^{s-2}; each block
  // then sits at t_b = min(R_b, ||w_b|| / lambda). Fixed point of rho -> ||t||.
  auto induced_radius = [&](double rho) {
    const double lambda = c * s * std::pow(rho, s - 2.0);
    double acc = 0.0;
    for (const auto& b : blocks) {
      const double t = std::min(b.radius, b.w.norm() / lambda);
      acc += t * t;
    }
    return std::sqrt(acc);
  };
  const double rho_max = std::sqrt(rho_max_sq);
  double rho = 0.0;
  if (s == 2.0) {
    rho = induced_radius(1.0);
  } else {
    double lo = 0.0;
    double hi = rho_max;
    if (induced_radius(hi) >= hi) {
      rho = hi;
    } else {
      for (int it = 0; it < 400 && hi - lo > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == 0.0 || induced_radius(mid) > mid) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      rho = 0.5 * (lo + hi);
    }
  }
  const double lambda = c * s * std::pow(std::max(rho, std::numeric_limits<double>::min()), s - 2.0);
  for (const auto& b : blocks) {
    const double wn = b.w.norm();
    if (wn == 0.0) {
      out.push_back(VectorXd::Zero(b.w.size()));
      continue;
    }
    const double t = std::min(b.radius, wn / lambda);
    out.push_back(b.w * (t / wn));
  }
  return out;
}

}  // namespace detail

/// argmin_v { V_z(v) + <gamma g, v> } over the setup's domain.
inline VectorXd prox_step(const ProxSetup& s, const VectorXd& z, const VectorXd& g, double gamma) {
  detail::require<DimensionMismatch>(z.size() == s.dim() && g.size() == s.dim(), "prox_step: dimension mismatch");
  detail::require<InvalidArgument>(gamma >= 0.0 && std::isfinite(gamma), "prox_step: gamma must be finite and >= 0");
  detail::require<InvalidArgument>(g.allFinite(), "prox_step: non-finite direction");
  if (gamma == 0.0 || g.isZero(0.0)) return s.domain.project(z);
  switch (s.kind) {
    case ProxKind::Euclidean:
      return s.domain.project(z - gamma * g);
    case ProxKind::Entropy: {
      VectorXd logits = z.array().max(kSimplexFloor).log().matrix() - gamma * g;
      logits.array() -= logits.maxCoeff();
      VectorXd v = logits.array().exp().matrix();
      double total = v.sum();
      if (!std::isfinite(total) || total <= 0.0) throw NumericalOverflow("entropy prox: normalization failed");
      v /= total;
      v = v.cwiseMax(kSimplexFloor);
      v /= v.sum();
      if (!v.allFinite()) throw NumericalOverflow("entropy prox: non-finite iterate");
      return v;
    }
    case ProxKind::HeavyTail: {
      detail::require<InvalidArgument>(s.heavy_tail->q_exp == 2.0, "heavy-tail prox map implemented for q = 2 only");
      const auto& ball = s.domain.as_ball();
      VectorXd w = prox_gradient(s, z) - gamma * g;
      auto parts = detail::heavy_tail_radial_argmin(*s.heavy_tail, {{w, ball.radius}});
      return ball.center + parts.front();
    }
  }
  return z;
}

/// Setups of the two blocks of Z = X x Y; y is absent for pure minimization.
struct ProductSetup {
  ProxSetup x;
  std::optional<ProxSetup> y;

  int dx() const { return x.dim(); }
  int dy() const { return y ? y->dim() : 0; }
  int dim() const { return dx() + dy(); }

  /// Common kind of both blocks, if they agree.
  std::optional<ProxKind> common_kind() const {
    if (!y || y->kind == x.kind) return x.kind;
    return std::nullopt;
  }

  int p_norm() const { return (y && y->p_norm == 2) ? 2 : x.p_norm; }

  /// sqrt(E ||e||_q^4) bound for the sphere of the joint space.
  double a_q_sq() const {
    double a = sphere_moment_constant(x.p_norm, dim());
    if (y) a = std::max(a, sphere_moment_constant(y->p_norm, dim()));
    return a;
  }

  double diameter() const {
    if (y && x.kind == ProxKind::HeavyTail && y->kind == ProxKind::HeavyTail) {
      const auto& ht = *x.heavy_tail;
      const double rx = x.domain.as_ball().radius;
      const double ry = y->domain.as_ball().radius;
      const double r = std::sqrt(rx * rx + ry * ry);
      return std::sqrt(4.0 * ht.coefficient() * ht.power() * std::pow(r, ht.power()));
    }
    const double dx2 = x.diameter * x.diameter;
    const double dy2 = y ? y->diameter * y->diameter : 0.0;
    return std::sqrt(dx2 + dy2);
  }

  VectorXd center() const {
    VectorXd z(dim());
    z.head(dx()) = prox_center(x);
    if (y) z.tail(dy()) = prox_center(*y);
    return z;
  }

  bool contains(const VectorXd& z, double tol = kDomainTol) const {
    if (z.size() != dim()) return false;
    if (!x.domain.contains(z.head(dx()), tol)) return false;
    return !y || y->domain.contains(z.tail(dy()), tol);
  }
};

/// Joint Bregman divergence; additive over blocks except for the joint
/// heavy-tail prox-function.
inline double bregman(const ProductSetup& s, const VectorXd& z, const VectorXd& v) {
  detail::require<DimensionMismatch>(z.size() == s.dim() && v.size() == s.dim(), "bregman: dimension mismatch");
  if (s.y && s.x.kind == ProxKind::HeavyTail && s.y->kind == ProxKind::HeavyTail) {
    if (!s.contains(z) || !s.contains(v)) throw DomainViolation("bregman: point outside the domain");
    const auto& ht = *s.x.heavy_tail;
    const VectorXd c = s.center();
    const VectorXd uz = z - c;
    const VectorXd uv = v - c;
    const double coef = ht.coefficient();
    const double pw = ht.power();
    const double nv = uv.norm();
    const double om_z = uz.norm() == 0.0 ? 0.0 : coef * std::pow(uz.norm(), pw);
    const double om_v = nv == 0.0 ? 0.0 : coef * std::pow(nv, pw);
    const double grad_dot = nv == 0.0 ? 0.0 : coef * pw * std::pow(nv, pw - 2.0) * uv.dot(z - v);
    return std::max(om_z - om_v - grad_dot, 0.0);
  }
  double acc = bregman(s.x, z.head(s.dx()), v.head(s.dx()));
  if (s.y) acc += bregman(*s.y, z.tail(s.dy()), v.tail(s.dy()));
  return acc;
}

/// Two block-wise prox steps with a common step size.
inline VectorXd separated_prox_step(const ProductSetup& s, const VectorXd& z, const VectorXd& g, double gamma) {
  detail::require<DimensionMismatch>(z.size() == s.dim() && g.size() == s.dim(), "prox: dimension mismatch");
  VectorXd out(s.dim());
  out.head(s.dx()) = prox_step(s.x, z.head(s.dx()), g.head(s.dx()), gamma);
  if (s.y) out.tail(s.dy()) = prox_step(*s.y, z.tail(s.dy()), g.tail(s.dy()), gamma);
  return out;
}

/// One prox step on Z with the joint prox-function. Both blocks must share a
/// prox kind.
inline VectorXd joint_prox_step(const ProductSetup& s, const VectorXd& z, const VectorXd& g, double gamma) {
  detail::require<DimensionMismatch>(z.size() == s.dim() && g.size() == s.dim(), "prox: dimension mismatch");
  detail::require<InvalidArgument>(gamma >= 0.0 && std::isfinite(gamma), "prox: gamma must be finite and >= 0");
  const auto kind = s.common_kind();
  if (!kind) throw ConfigError("joint prox requires the same prox kind on X and Y");
  const int dx = s.dx();
  const int dy = s.dy();
  switch (*kind) {
    case ProxKind::Euclidean: {
      // omega = 1/2 ||z - c||^2 on a product set: project the shifted point.
      VectorXd moved = z - gamma * g;
      VectorXd out(s.dim());
      out.head(dx) = s.x.domain.project(moved.head(dx));
      if (s.y) out.tail(dy) = s.y->domain.project(moved.tail(dy));
      return out;
    }
    case ProxKind::Entropy: {
      // Multiplicative weights with one normalization per simplex factor.
      VectorXd logits = z.array().max(kSimplexFloor).log().matrix() - gamma * g;
      VectorXd out(s.dim());
      auto normalize = [](VectorXd block) {
        block.array() -= block.maxCoeff();
        block = block.array().exp().matrix();
        const double total = block.sum();
        if (!std::isfinite(total) || total <= 0.0) throw NumericalOverflow("entropy prox: normalization failed");
        block /= total;
        block = block.cwiseMax(kSimplexFloor);
        return VectorXd(block / block.sum());
      };
      out.head(dx) = normalize(logits.head(dx));
      if (s.y) out.tail(dy) = normalize(logits.tail(dy));
      return out;
    }
    case ProxKind::HeavyTail: {
      const auto& ht = *s.x.heavy_tail;
      detail::require<InvalidArgument>(ht.q_exp == 2.0, "heavy-tail prox map implemented for q = 2 only");
      if (s.y) {
        detail::require<InvalidArgument>(s.y->heavy_tail->kappa == ht.kappa && s.y->heavy_tail->q_exp == ht.q_exp,
                                         "joint heavy-tail prox requires identical parameters on both blocks");
      }
      const VectorXd c = s.center();
      const VectorXd u = z - c;
      const double n = u.norm();
      VectorXd grad = VectorXd::Zero(s.dim());
      if (n > 0.0) grad = ht.coefficient() * ht.power() * std::pow(n, ht.power() - 2.0) * u;
      const VectorXd w = grad - gamma * g;
      std::vector<detail::RadialBlock> blocks{{w.head(dx), s.x.domain.as_ball().radius}};
      if (s.y) blocks.push_back({w.tail(dy), s.y->domain.as_ball().radius});
      auto parts = detail::heavy_tail_radial_argmin(ht, blocks);
      VectorXd out(s.dim());
      out.head(dx) = c.head(dx) + parts[0];
      if (s.y) out.tail(dy) = c.tail(dy) + parts[1];
      return out;
    }
  }
  return z;
}

/// Joint prox-function gradient (used by optimality checks).
inline VectorXd prox_gradient(const ProductSetup& s, const VectorXd& z) {
  if (s.y && s.x.kind == ProxKind::HeavyTail && s.y->kind == ProxKind::HeavyTail) {
    const auto& ht = *s.x.heavy_tail;
    const VectorXd u = z - s.center();
    const double n = u.norm();
    if (n == 0.0) return VectorXd::Zero(z.size());
    return ht.coefficient() * ht.power() * std::pow(n, ht.power() - 2.0) * u;
  }
  VectorXd out(s.dim());
  out.head(s.dx()) = prox_gradient(s.x, z.head(s.dx()));
  if (s.y) out.tail(s.dy()) = prox_gradient(*s.y, z.tail(s.dy()));
  return out;
}

}  // namespace zo_saddle
