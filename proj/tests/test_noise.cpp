#include <gtest/gtest.h>

#include <cmath>

#include "zo_saddle/noise.hpp"
#include "zo_saddle/problems.hpp"
#include "zo_saddle/verify.hpp"

using namespace zo_saddle;

namespace {

VectorXd random_point(int d, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng);
  return z;
}

}  // namespace

TEST(NoisyEval, NoneIsExact) {
  const auto p = random_bilinear_ball_game(2, 3, 1, 0.5, PayoffNoise::uniform(1.0));
  Rng rng = make_stream(1, "test/noise-none");
  for (int i = 0; i < 100; ++i) {
    const VectorXd z = sample_problem_point(p, rng);
    const double xi = p.sample_xi(rng);
    EXPECT_EQ(noisy_eval(p, NoiseModel::none(), z, xi), p.value(z, xi));
  }
}

TEST(NoisyEval, BoundedStaysWithinDelta) {
  const auto p = random_bilinear_ball_game(2, 2, 2);
  for (auto shape : {WaveShape::Square, WaveShape::Sine}) {
    const auto m = NoiseModel::bounded(0.03, 0.01, 4, 5, shape);
    Rng rng = make_stream(2, "test/noise-bounded");
    for (int i = 0; i < 10000; ++i) {
      const VectorXd z = sample_problem_point(p, rng);
      EXPECT_LE(std::abs(noisy_eval(p, m, z, 0.0) - p.value(z, 0.0)), 0.03 + 1e-15);
    }
  }
}

TEST(Noise, BoundedMaxOverManyPoints) {
  const auto m = NoiseModel::bounded(0.25, 0.05, 6, 3);
  Rng rng = make_stream(3, "test/noise-max");
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) worst = std::max(worst, std::abs(m(random_point(6, 3.0, rng))));
  EXPECT_LE(worst, 0.25);
  EXPECT_DOUBLE_EQ(worst, 0.25);
}

TEST(Noise, LipschitzRatio) {
  const auto m = NoiseModel::lipschitz(0.7, 5, 4);
  Rng rng = make_stream(4, "test/noise-lipschitz");
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const VectorXd z1 = random_point(5, 2.0, rng);
    const VectorXd z2 = z1 + random_point(5, 1e-3, rng);
    worst = std::max(worst, std::abs(m(z1) - m(z2)) / (z1 - z2).norm());
  }
  EXPECT_LE(worst, 0.7 * (1.0 + 1e-9));
  // Attained along u at a zero of the sine.
  const double h = 1e-7;
  const double slope = (m(h * m.direction) - m(-h * m.direction)) / (2.0 * h);
  EXPECT_NEAR(slope, 0.7, 1e-9);
}

TEST(Noise, DeterministicInZ) {
  const auto m = NoiseModel::bounded(0.1, 0.02, 3, 8);
  const VectorXd z = VectorXd::Constant(3, 0.37);
  EXPECT_EQ(m(z), m(z));
  const auto m2 = NoiseModel::bounded(0.1, 0.02, 3, 8);
  EXPECT_EQ(m(z), m2(z));
}

TEST(Noise, AnchorPutsZeroCrossingOnPoint) {
  const VectorXd z = VectorXd::Constant(4, 0.3);
  const auto sine = NoiseModel::bounded(0.1, 0.5, 4, 9, WaveShape::Sine).anchored_at(z);
  EXPECT_NEAR(sine(z), 0.0, 1e-15);
  const auto square = NoiseModel::bounded(0.1, 0.5, 4, 9).anchored_at(z);
  EXPECT_DOUBLE_EQ(square(z + 1e-6 * square.direction), 0.1);
  EXPECT_DOUBLE_EQ(square(z - 1e-6 * square.direction), -0.1);
}

TEST(Noise, AmplitudeOverrideKeepsDeclaredBound) {
  const auto m = NoiseModel::bounded(0.01, 0.1, 2, 1).with_amplitude(0.05);
  EXPECT_DOUBLE_EQ(m.delta_max(), 0.01);
  EXPECT_DOUBLE_EQ(m.amplitude, 0.05);
}

TEST(Noise, InvalidParameters) {
  EXPECT_THROW(NoiseModel::bounded(-1.0, 0.1, 2, 0), InvalidArgument);
  EXPECT_THROW(NoiseModel::bounded(0.1, 0.0, 2, 0), InvalidArgument);
  EXPECT_THROW(NoiseModel::lipschitz(-0.1, 2, 0), InvalidArgument);
}

TEST(BiasProbe, NoneIsZero) {
  EXPECT_DOUBLE_EQ(adversarial_bias_probe(NoiseModel::none(), VectorXd::Unit(3, 0), 0.1), 0.0);
}

TEST(BiasProbe, BoundedWithinEnvelopeAndAttained) {
  const int d = 4;
  const double delta = 0.02;
  const double tau = 0.05;
  const auto m = NoiseModel::bounded(delta, tau, d, 6);
  const double probe = adversarial_bias_probe(m, m.direction, tau);
  EXPECT_LE(probe, d * delta / tau * (1.0 + 1e-12));
  // A square wave of wavelength tau flips sign between z - tau u and z + tau u.
  EXPECT_NEAR(probe, d * delta / tau, 1e-12);
  Rng rng = make_stream(6, "test/probe");
  for (int i = 0; i < 20; ++i) {
    VectorXd dir = random_point(d, 1.0, rng);
    dir.normalize();
    EXPECT_LE(adversarial_bias_probe(m, dir, tau), d * delta / tau * (1.0 + 1e-12));
  }
}

TEST(BiasProbe, LipschitzIndependentOfTau) {
  const int d = 3;
  const auto m = NoiseModel::lipschitz(0.4, d, 2);
  for (double tau : {1e-4, 1e-2, 0.5, 2.0}) {
    const double probe = adversarial_bias_probe(m, m.direction, tau);
    EXPECT_LE(probe, d * 0.4 * (1.0 + 1e-9));
  }
  EXPECT_NEAR(adversarial_bias_probe(m, m.direction, 1e-4), d * 0.4, 1e-6);
}

TEST(NoisyOracle, CountsCalls) {
  const auto p = abs_problem_1d();
  const auto m = NoiseModel::none();
  NoisyOracle oracle(p, m);
  for (int i = 0; i < 7; ++i) oracle(VectorXd::Zero(1), 0.0);
  EXPECT_EQ(oracle.calls(), 7);
}
