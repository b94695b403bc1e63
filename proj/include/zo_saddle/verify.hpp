#pragma once

// Monte Carlo checks of the auxiliary inequalities behind the estimator and
// the solver. Every comparison is inflated by (1 + 3/sqrt(n)) or 3 standard
// errors; nothing else is tolerated.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zo_saddle/errors.hpp"
#include "zo_saddle/estimator.hpp"
#include "zo_saddle/geometry.hpp"
#include "zo_saddle/metrics.hpp"
#include "zo_saddle/noise.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/rng.hpp"
#include "zo_saddle/solver.hpp"

namespace zo_saddle {

inline constexpr double kSecondMomentCeiling = 8.0;

struct LemmaCheckReport {
  std::string lemma_id;
  long n_samples = 0;
  double statistic = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

inline double sample_slack(long n) { return 3.0 / std::sqrt(static_cast<double>(std::max(1L, n))); }

namespace detail {

inline LemmaCheckReport make_report(std::string id, long n, double statistic, double bound, bool pass,
                                    std::uint64_t seed) {
  return {std::move(id), n, statistic, bound, bound - statistic, pass, seed};
}

/// Passes iff statistic <= bound (1 + 3/sqrt(n)).
inline LemmaCheckReport relative_report(std::string id, long n, double statistic, double bound, std::uint64_t seed) {
  return make_report(std::move(id), n, statistic, bound, statistic <= bound * (1.0 + sample_slack(n)), seed);
}

}  // namespace detail

inline VectorXd sample_domain_point(const DomainSpec& domain, Rng& rng) {
  if (domain.is_ball()) {
    const auto& b = domain.as_ball();
    return b.center + b.radius * sample_ball(domain.dim(), rng);
  }
  if (domain.is_simplex()) {
    std::exponential_distribution<double> expo(1.0);
    VectorXd v(domain.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = expo(rng);
    return v / v.sum();
  }
  const auto& box = domain.as_box();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  VectorXd v(domain.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = box.lo[i] + unit(rng) * (box.hi[i] - box.lo[i]);
  return v;
}

inline VectorXd problem_center(const SaddleProblem& p) {
  VectorXd z(p.dim());
  z.head(p.dx) = p.x_domain.center();
  if (p.y_domain) z.tail(p.dy) = p.y_domain->center();
  return z;
}

inline VectorXd sample_problem_point(const SaddleProblem& p, Rng& rng) {
  VectorXd z(p.dim());
  z.head(p.dx) = sample_domain_point(p.x_domain, rng);
  if (p.y_domain) z.tail(p.dy) = sample_domain_point(*p.y_domain, rng);
  return z;
}

/// E|<e, r>| <= ||r||_2 / sqrt(d) for a single r.
inline LemmaCheckReport check_inner_product_bound(const VectorXd& r, long n_samples, std::uint64_t seed) {
  detail::require<InvalidArgument>(r.size() >= 1 && n_samples >= 1, "inner product check: bad arguments");
  Rng rng = make_stream(seed, "verify/inner-product");
  const int d = static_cast<int>(r.size());
  double sum = 0.0;
  for (long i = 0; i < n_samples; ++i) sum += std::abs(sample_sphere(d, rng).e.dot(r));
  const double stat = sum / static_cast<double>(n_samples);
  return detail::relative_report("inner_product/d=" + std::to_string(d), n_samples, stat,
                                 r.norm() / std::sqrt(static_cast<double>(d)), seed);
}

/// Worst normalized ratio E|<e, r>| / ||r||_2 over random directions r, against 1/sqrt(d).
/// One draw of e is shared by all directions.
inline LemmaCheckReport check_inner_product_bound(int d, long n_samples, int n_directions, std::uint64_t seed) {
  detail::require<InvalidArgument>(d >= 1 && n_samples >= 1 && n_directions >= 1,
                                   "inner product check: bad arguments");
  Rng dir_rng = make_stream(seed, "verify/inner-product-directions");
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd dirs(d, n_directions);
  for (int j = 0; j < n_directions; ++j) {
    for (int i = 0; i < d; ++i) dirs(i, j) = normal(dir_rng);
    dirs.col(j).normalize();
  }
  Rng rng = make_stream(seed, "verify/inner-product");
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n_directions);
  for (long i = 0; i < n_samples; ++i) sums += (dirs.transpose() * sample_sphere(d, rng).e).cwiseAbs();
  const double stat = sums.maxCoeff() / static_cast<double>(n_samples);
  return detail::relative_report("inner_product/d=" + std::to_string(d), n_samples, stat,
                                 1.0 / std::sqrt(static_cast<double>(d)), seed);
}

/// sup_z |f^tau(z) - f(z)| <= tau M2. The statistic is the largest |f^tau - f| - 3 se.
inline LemmaCheckReport check_smoothing_gap(const SaddleProblem& problem, double tau, int n_points, long n_samples,
                                            std::uint64_t seed, const std::string& label = "") {
  detail::require<InvalidArgument>(tau >= 0.0 && n_points >= 1 && n_samples >= 2, "smoothing check: bad arguments");
  Rng point_rng = make_stream(seed, "verify/smoothing-points");
  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const VectorXd z = sample_problem_point(problem, point_rng);
    Rng rng = make_stream(seed, "verify/smoothing", static_cast<std::uint64_t>(i));
    const McEstimate est = smooth_value(problem, z, tau, n_samples, rng);
    worst = std::max(worst, std::abs(est.mean - problem.mean_value(z)) - 3.0 * est.std_error);
  }
  const double bound = tau * problem.M2;
  const std::string id = "smoothing/" + (label.empty() ? problem.name : label);
  return detail::make_report(id, n_samples, worst, bound, worst <= bound, seed);
}

struct SecondMomentSample {
  McEstimate mean_sq;
  double max_norm = 0.0;
};

/// Moments of ||g||_2 at z over n draws of (e, xi).
inline SecondMomentSample second_moment_sample(const SaddleProblem& problem, const NoiseModel& model,
                                               const VectorXd& z, double tau, long n_samples, Rng& rng) {
  NoisyOracle oracle(problem, model);
  double mean = 0.0;
  double m2 = 0.0;
  double max_norm = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const GradientEstimate ge = estimate_gradient(oracle, z, tau, rng);
    const double v = ge.g.squaredNorm();
    max_norm = std::max(max_norm, std::sqrt(v));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double se = n_samples > 1 ? std::sqrt(m2 / static_cast<double>(n_samples - 1) / n_samples) : 0.0;
  return {{mean, se}, max_norm};
}

/// a_q^2 d M2^2 + d^2 a_q^2 Delta^2 / tau^2 + a_q^2 d M_{2,delta}^2 with q = 2.
inline double second_moment_scale(int d, double m2, double delta_max, double tau, double m2_delta = 0.0) {
  const double dd = static_cast<double>(d);
  return dd * m2 * m2 + dd * dd * delta_max * delta_max / (tau * tau) + dd * m2_delta * m2_delta;
}

using ProblemFamily = std::function<SaddleProblem(int)>;
using NoiseFamily = std::function<NoiseModel(int)>;

/// E||g||^2 / scale stays below c_max across the dimension grid; z is the
/// domain center.
inline LemmaCheckReport check_second_moment(const ProblemFamily& family, const NoiseFamily& noise, double tau,
                                            const std::vector<int>& d_grid, long n_samples, std::uint64_t seed,
                                            const std::string& label) {
  detail::require<InvalidArgument>(!d_grid.empty() && n_samples >= 2, "second moment check: bad arguments");
  double worst = 0.0;
  for (std::size_t k = 0; k < d_grid.size(); ++k) {
    const SaddleProblem p = family(d_grid[k]);
    const NoiseModel m = noise(p.dim());
    Rng rng = make_stream(seed, "verify/second-moment", k);
    const VectorXd z = problem_center(p);
    const auto s = second_moment_sample(p, m, z, tau, n_samples, rng);
    const double scale = second_moment_scale(p.dim(), p.M2, m.delta_max(), tau, m.lipschitz_constant());
    worst = std::max(worst, (s.mean_sq.mean - 3.0 * s.mean_sq.std_error) / scale);
  }
  return detail::make_report("second_moment/" + label, n_samples, worst, kSecondMomentCeiling,
                             worst <= kSecondMomentCeiling, seed);
}

/// Without noise, doubling d doubles E||g||^2: every ratio lies in [1.5, 2.5].
/// The statistic is the largest |ratio - 2|, compared with 0.5.
inline LemmaCheckReport check_second_moment_doubling(const ProblemFamily& family, double tau,
                                                     const std::vector<int>& d_grid, long n_samples,
                                                     std::uint64_t seed, const std::string& label) {
  detail::require<InvalidArgument>(d_grid.size() >= 2, "doubling check: need at least two dimensions");
  std::vector<McEstimate> est;
  for (std::size_t k = 0; k < d_grid.size(); ++k) {
    const SaddleProblem p = family(d_grid[k]);
    Rng rng = make_stream(seed, "verify/second-moment-doubling", k);
    est.push_back(second_moment_sample(p, NoiseModel::none(), problem_center(p), tau, n_samples, rng).mean_sq);
  }
  double worst = 0.0;
  bool pass = true;
  for (std::size_t k = 1; k < est.size(); ++k) {
    detail::require<InvalidArgument>(d_grid[k] == 2 * d_grid[k - 1], "doubling check: grid must double");
    const double ratio = est[k].mean / est[k - 1].mean;
    const double rel_se = std::hypot(est[k].std_error / est[k].mean, est[k - 1].std_error / est[k - 1].mean);
    const double dev = std::abs(ratio - 2.0);
    worst = std::max(worst, dev);
    if (dev > 0.5 + 3.0 * rel_se * ratio) pass = false;
  }
  return detail::make_report("second_moment/doubling-" + label, n_samples, worst, 0.5, pass, seed);
}

/// Excess E||g||^2 over the noiseless value, in units of d^2 Delta^2 / tau^2,
/// stays within a factor-4 band across a (Delta, tau) grid (wavelength tied
/// to tau). Common random numbers are used for the noisy and noiseless runs.
inline LemmaCheckReport check_second_moment_noise_band(const SaddleProblem& problem, const std::vector<double>& deltas,
                                                       const std::vector<double>& taus, long n_samples,
                                                       std::uint64_t seed) {
  const int d = problem.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::uint64_t k = 0;
  for (double tau : taus) {
    for (double delta : deltas) {
      const NoiseModel m = NoiseModel::bounded(delta, tau, d, derive_seed(seed, "verify/band-direction", 0));
      Rng a = make_stream(seed, "verify/band", k);
      Rng b = make_stream(seed, "verify/band", k);
      const double noisy = second_moment_sample(problem, m, problem_center(problem), tau, n_samples, a).mean_sq.mean;
      const double clean =
          second_moment_sample(problem, NoiseModel::none(), problem_center(problem), tau, n_samples, b).mean_sq.mean;
      const double unit = static_cast<double>(d) * d * delta * delta / (tau * tau);
      const double ratio = (noisy - clean) / unit;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ++k;
    }
  }
  const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return detail::make_report("second_moment/noise-band", n_samples, spread, 4.0, spread <= 4.0, seed);
}

/// Almost-sure envelope ||g||_2 <= d (M2 + Delta / tau) for a deterministic f,
/// with Delta the declared bound of the model.
inline LemmaCheckReport check_gradient_envelope(const SaddleProblem& problem, const NoiseModel& model, double tau,
                                                long n_samples, std::uint64_t seed) {
  Rng rng = make_stream(seed, "verify/envelope");
  const auto s = second_moment_sample(problem, model, problem_center(problem), tau, n_samples, rng);
  const double d = static_cast<double>(problem.dim());
  const double bound = d * (problem.M2 + model.delta_max() / tau + model.lipschitz_constant());
  return detail::make_report("second_moment/envelope", n_samples, s.max_norm, bound,
                             s.max_norm <= bound * (1.0 + 1e-12), seed);
}

/// |E<g, r> - <grad f^tau, r>| <= (d Delta / tau + d M_{2,delta}) ||r|| / sqrt(d) over
/// test directions r. The statistic is the largest (deviation - 3 sigma) / ||r||.
inline LemmaCheckReport check_estimator_bias(const SaddleProblem& problem, const NoiseModel& model, const VectorXd& z,
                                             double tau, long n_samples, const std::vector<VectorXd>& directions,
                                             std::uint64_t seed, const std::string& label) {
  detail::require<InvalidArgument>(tau > 0.0 && n_samples >= 2, "bias check: bad arguments");
  const int d = problem.dim();
  const double dd = static_cast<double>(d);
  std::vector<double> dots(directions.size(), 0.0);
  std::vector<double> dots_sq(directions.size(), 0.0);
  std::vector<double> ref(directions.size(), 0.0);
  std::vector<double> ref_sq(directions.size(), 0.0);
  {
    Rng rng = make_stream(seed, "verify/bias-estimator");
    NoisyOracle oracle(problem, model);
    for (long i = 0; i < n_samples; ++i) {
      const GradientEstimate ge = estimate_gradient(oracle, z, tau, rng);
      for (std::size_t j = 0; j < directions.size(); ++j) {
        const double v = ge.g.dot(directions[j]);
        dots[j] += v;
        dots_sq[j] += v * v;
      }
    }
  }
  {
    // Reference <grad f^tau, r> in descent-field form from the one-point identity.
    Rng rng = make_stream(seed, "verify/bias-reference");
    const double f0 = problem.mean_value(z);
    for (long i = 0; i < n_samples; ++i) {
      const Direction dir = sample_sphere(d, problem.dx, rng);
      const VectorXd v = descent_field((dd / tau) * (problem.mean_value(z + tau * dir.e) - f0) * dir.e, problem.dx);
      for (std::size_t j = 0; j < directions.size(); ++j) {
        const double w = v.dot(directions[j]);
        ref[j] += w;
        ref_sq[j] += w * w;
      }
    }
  }
  const double n = static_cast<double>(n_samples);
  auto stderr_of = [n](double sum, double sum_sq) {
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0));
  };
  // Normalized by ||r||; r = 0 must give exactly zero on both sides.
  const double bound = (dd * model.delta_max() / tau + dd * model.lipschitz_constant()) / std::sqrt(dd);
  double worst = 0.0;
  bool pass = true;
  for (std::size_t j = 0; j < directions.size(); ++j) {
    const double r_norm = directions[j].norm();
    const double diff = std::abs(dots[j] / n - ref[j] / n);
    if (r_norm == 0.0) {
      if (diff != 0.0) pass = false;
      continue;
    }
    const double sigma = std::hypot(stderr_of(dots[j], dots_sq[j]), stderr_of(ref[j], ref_sq[j]));
    worst = std::max(worst, (diff - 3.0 * sigma) / r_norm);
  }
  pass = pass && worst <= bound * (1.0 + sample_slack(n_samples));
  return detail::make_report("bias/" + label, n_samples, worst, bound, pass, seed);
}

struct TailReport {
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
  std::vector<double> gaps;
};

/// Final gaps of n_trials independent solves (seed streams derived from `seed`).
inline TailReport empirical_tail_report(const SaddleProblem& problem, const NoiseModel& model,
                                        const ProductSetup& setup, SolverConfig config, int n_trials,
                                        std::uint64_t seed) {
  detail::require<InvalidArgument>(n_trials >= 1, "tail report: need at least one trial");
  TailReport out;
  config.record_gaps = false;
  for (int t = 0; t < n_trials; ++t) {
    config.seed = derive_seed(seed, "verify/tail-trial", static_cast<std::uint64_t>(t));
    const RunReport r = solve(problem, model, setup, config);
    out.gaps.push_back(r.final_gap.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  out.q50 = quantile(out.gaps, 0.5);
  out.q90 = quantile(out.gaps, 0.9);
  out.q99 = quantile(out.gaps, 0.99);
  return out;
}

/// q90 <= 3 q50.
inline LemmaCheckReport check_tail_ratio(const TailReport& t, const std::string& label, std::uint64_t seed) {
  const double bound = 3.0 * t.q50;
  return detail::make_report("tails/" + label, static_cast<long>(t.gaps.size()), t.q90, bound, t.q90 <= bound, seed);
}

struct VerifyOptions {
  std::uint64_t seed = 7;
  /// Realized amplitude of the noise in the noise-driven checks; the declared
  /// bound stays at its default. Setting it above the bound must fail.
  std::optional<double> noise_amplitude;
};

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"all", "inner_product", "smoothing", "second_moment", "bias", "tails"};
  return names;
}

namespace detail {

inline constexpr double kVerifyDelta = 0.01;
inline constexpr double kVerifyTau = 0.05;

inline SaddleProblem unit_linear_family(int d) {
  VectorXd c = VectorXd::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  return linear_problem(c, 1.0);
}

/// ||x - x0||_1 / sqrt(d) with every kink within tau of the center.
inline SaddleProblem l1_family(int d) {
  return l1_distance_problem(VectorXd::Constant(d, 0.01), 1.0);
}

inline NoiseModel verify_noise(const VerifyOptions& opt, int d, double wavelength, std::uint64_t seed) {
  NoiseModel m = NoiseModel::bounded(kVerifyDelta, wavelength, d, derive_seed(seed, "verify/noise-direction", 0));
  if (opt.noise_amplitude) m = m.with_amplitude(*opt.noise_amplitude);
  return m;
}

inline std::vector<LemmaCheckReport> suite_inner_product(const VerifyOptions& opt) {
  std::vector<LemmaCheckReport> out;
  for (int d : {1, 2, 4, 16, 64, 256}) out.push_back(check_inner_product_bound(d, 100000, 16, opt.seed));
  return out;
}

inline std::vector<LemmaCheckReport> suite_smoothing(const VerifyOptions& opt) {
  std::vector<LemmaCheckReport> out;
  out.push_back(check_smoothing_gap(abs_problem_1d(), 0.1, 16, 20000, opt.seed));
  out.push_back(check_smoothing_gap(l1_family(8), 0.1, 16, 20000, opt.seed));
  MatrixXd pennies(2, 2);
  pennies << 1, -1, -1, 1;
  out.push_back(check_smoothing_gap(matrix_game(pennies), 0.1, 16, 20000, opt.seed, "matching_pennies"));
  out.push_back(check_smoothing_gap(random_bilinear_ball_game(4, 4, opt.seed, 0.5), 0.1, 16, 20000, opt.seed));
  return out;
}

inline std::vector<LemmaCheckReport> suite_second_moment(const VerifyOptions& opt) {
  std::vector<LemmaCheckReport> out;
  const std::vector<int> grid{2, 4, 8, 16, 32, 64, 128};
  const auto none = [](int) { return NoiseModel::none(); };
  out.push_back(check_second_moment(unit_linear_family, none, kVerifyTau, grid, 40000, opt.seed, "linear"));
  out.push_back(check_second_moment(l1_family, none, kVerifyTau, grid, 40000, opt.seed, "l1"));
  const auto bounded = [&opt](int d) { return verify_noise(opt, d, kVerifyTau, opt.seed); };
  out.push_back(check_second_moment(unit_linear_family, bounded, kVerifyTau, grid, 40000, opt.seed, "linear-bounded"));
  out.push_back(check_second_moment_doubling(unit_linear_family, kVerifyTau, grid, 40000, opt.seed, "linear"));
  out.push_back(check_second_moment_noise_band(linear_problem(VectorXd::Zero(8)), {0.005, 0.01, 0.02}, {0.02, 0.05, 0.1}, 40000,
                                               opt.seed));
  // Delta / tau = 1: any straddled jump of an over-sized wave breaks the envelope.
  const SaddleProblem env = unit_linear_family(8);
  NoiseModel m = NoiseModel::bounded(kVerifyTau, kVerifyTau, env.dim(), derive_seed(opt.seed, "verify/noise-direction", 0));
  if (opt.noise_amplitude) m = m.with_amplitude(*opt.noise_amplitude * kVerifyTau / kVerifyDelta);
  out.push_back(check_gradient_envelope(env, m, kVerifyTau, 40000, opt.seed));
  return out;
}

inline std::vector<VectorXd> bias_directions(const NoiseModel& model, int d, std::uint64_t seed) {
  std::vector<VectorXd> dirs;
  if (model.kind != NoiseKind::None) dirs.push_back(model.direction);
  Rng rng = make_stream(seed, "verify/bias-directions");
  for (int j = 0; j < 3; ++j) dirs.push_back(sample_sphere(d, rng).e);
  dirs.push_back(VectorXd::Zero(d));
  return dirs;
}

inline std::vector<LemmaCheckReport> suite_bias(const VerifyOptions& opt) {
  std::vector<LemmaCheckReport> out;
  const SaddleProblem p = random_bilinear_ball_game(2, 2, opt.seed, 0.5);
  const VectorXd z = VectorXd::Constant(p.dim(), 0.1);
  const NoiseModel clean = NoiseModel::none();
  out.push_back(check_estimator_bias(p, clean, z, kVerifyTau, 200000, bias_directions(clean, p.dim(), opt.seed),
                                     opt.seed, "noiseless"));
  // A wave much longer than tau with its jump through z: nearly every pair straddles it.
  const NoiseModel square = verify_noise(opt, p.dim(), 10.0, opt.seed).anchored_at(z);
  out.push_back(check_estimator_bias(p, square, z, kVerifyTau, 200000, bias_directions(square, p.dim(), opt.seed),
                                     opt.seed, "bounded-square"));
  const NoiseModel lip = NoiseModel::lipschitz(0.05, p.dim(), derive_seed(opt.seed, "verify/noise-direction", 1));
  out.push_back(check_estimator_bias(p, lip, z, kVerifyTau, 200000, bias_directions(lip, p.dim(), opt.seed), opt.seed,
                                     "lipschitz"));
  return out;
}

inline std::vector<LemmaCheckReport> suite_tails(const VerifyOptions& opt) {
  std::vector<LemmaCheckReport> out;
  MatrixXd pennies(2, 2);
  pennies << 1, -1, -1, 1;
  const SaddleProblem p = matrix_game(pennies, PayoffNoise::uniform(1.0));
  const ProductSetup setup{ProxSetup::euclidean(p.x_domain), ProxSetup::euclidean(*p.y_domain)};
  SolverConfig cfg;
  cfg.n_iters = 1000;
  cfg.tau = 1e-3;
  out.push_back(check_tail_ratio(empirical_tail_report(p, NoiseModel::none(), setup, cfg, 50, opt.seed),
                                 "matching_pennies", opt.seed));
  const NoiseModel m = NoiseModel::bounded(1e-4, 1e-3, p.dim(), derive_seed(opt.seed, "verify/noise-direction", 2));
  cfg.step_rule = step::Case1{m.delta_max()};
  out.push_back(check_tail_ratio(empirical_tail_report(p, m, setup, cfg, 50, opt.seed), "matching_pennies-bounded",
                                 opt.seed));
  return out;
}

}  // namespace detail

/// Runs a named suite; throws ConfigError for unknown names.
inline std::vector<LemmaCheckReport> run_verify_suite(const std::string& name, const VerifyOptions& opt = {}) {
  using Suite = std::vector<LemmaCheckReport> (*)(const VerifyOptions&);
  const std::vector<std::pair<std::string, Suite>> suites{{"inner_product", detail::suite_inner_product},
                                                          {"smoothing", detail::suite_smoothing},
                                                          {"second_moment", detail::suite_second_moment},
                                                          {"bias", detail::suite_bias},
                                                          {"tails", detail::suite_tails}};
  std::vector<LemmaCheckReport> out;
  bool found = false;
  for (const auto& [suite_name, fn] : suites) {
    if (name == "all" || name == suite_name) {
      found = true;
      auto part = fn(opt);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  if (!found) throw ConfigError("unknown verify suite '" + name + "'");
  return out;
}

}  // namespace zo_saddle
