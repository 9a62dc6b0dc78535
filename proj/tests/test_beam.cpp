#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "beampinn/beam.hpp"

namespace beampinn {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Delta, GaussianExamples) {
  const double s = 1.0 / std::sqrt(2.0 * kPi);
  EXPECT_NEAR(gaussian_delta(0.0, 0.0, s), 1.0, 1e-15);
  EXPECT_NEAR(gaussian_delta(s, 0.0, s), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(gaussian_delta(-s, 0.0, s), std::exp(-0.5), 1e-15);
  // the mean shifts the peak
  EXPECT_NEAR(gaussian_delta(0.3, 0.3, 0.1), 1.0 / (0.1 * std::sqrt(2.0 * kPi)), 1e-12);
}

TEST(Delta, GaussianIntegratesToOne) {
  for (double sigma : {0.4, 0.05, 0.001}) {
    const int n = 200000;
    const double a = -12 * sigma, b = 12 * sigma, h = (b - a) / n;
    double sum = 0.5 * (gaussian_delta(a, 0, sigma) + gaussian_delta(b, 0, sigma));
    for (int i = 1; i < n; ++i) sum += gaussian_delta(a + i * h, 0, sigma);
    EXPECT_NEAR(sum * h, 1.0, 1e-9) << sigma;
  }
}

TEST(Delta, DiscreteIndicator) {
  EXPECT_EQ(discrete_delta(0.0, 1e-12), 1.0);
  EXPECT_EQ(discrete_delta(1e-6, 1e-12), 0.0);
  EXPECT_EQ(discrete_delta(-1e-13, 1e-12), 1.0);
  EXPECT_EQ(discrete_delta(1e-12, 1e-12), 0.0);
}

TEST(Delta, LoadShapeFollowsTheLoad) {
  const BeamConfig beam;
  const DeltaModel g;
  EXPECT_NEAR(load_shape(0.5, 0.5, beam, g), 1.0, 1e-15);
  EXPECT_NEAR(load_shape(1.0, 0.5, beam, g), std::exp(-kPi * 0.25), 1e-15);
  EXPECT_EQ(load_shape(0.5, 0.5, beam, DeltaModel::discrete()), 1.0);
  EXPECT_EQ(load_shape(0.6, 0.5, beam, DeltaModel::discrete()), 0.0);
}

TEST(Delta, NamesRoundTrip) {
  EXPECT_EQ(delta_kind_from_string(to_string(DeltaKind::kGaussian)), DeltaKind::kGaussian);
  EXPECT_EQ(delta_kind_from_string(to_string(DeltaKind::kDiscrete)), DeltaKind::kDiscrete);
  EXPECT_THROW(delta_kind_from_string("lorentzian"), ConfigError);
  EXPECT_THROW(DeltaModel::gaussian(0.0).validate(), ConfigError);
}

TEST(Residual, ZeroFieldUnderTheLoad) {
  const BeamConfig beam;
  EXPECT_NEAR(pde_residual(DerivBundle{}, 0.5, 0.5, beam, DeltaModel{}), -1.0, 1e-15);
  EXPECT_EQ(pde_residual(DerivBundle{}, 0.6, 0.5, beam, DeltaModel::discrete()), 0.0);
}

TEST(Residual, ManufacturedFreeVibration) {
  // u = sin(x) sin(t) solves m u_tt + EI u_xxxx = 0 for m = EI.
  BeamConfig beam;
  beam.p = 0.0;
  for (double x : {0.3, 1.7}) {
    for (double t : {0.2, 1.1}) {
      DerivBundle d;
      d.u = std::sin(x) * std::sin(t);
      d.u_tt = -d.u;
      d.u_xxxx = d.u;
      EXPECT_NEAR(pde_residual(d, x, t, beam, DeltaModel{}), 0.0, 1e-15);
    }
  }
  beam.m = 2.0;
  DerivBundle d;
  d.u_tt = 1.5;
  d.u_xxxx = -0.25;
  EXPECT_NEAR(pde_residual(d, 0.1, 0.1, beam, DeltaModel{}), 2.75, 1e-15);
}

TEST(Modal, Constants) {
  const BeamConfig beam;
  const ModalConstants one = modal_constants(1, beam);
  EXPECT_NEAR(one.driving, 1.0, 1e-15);
  EXPECT_NEAR(one.natural, 1.0, 1e-15);
  EXPECT_NEAR(one.speed_ratio, 1.0, 1e-15);
  const ModalConstants two = modal_constants(2, beam);
  EXPECT_NEAR(two.driving, 2.0, 1e-15);
  EXPECT_NEAR(two.natural, 4.0, 1e-15);
  EXPECT_NEAR(two.speed_ratio, 0.5, 1e-15);
  const ModalConstants three = modal_constants(3, beam);
  EXPECT_NEAR(three.natural, 9.0, 1e-14);
  EXPECT_NEAR(three.speed_ratio, 1.0 / 3.0, 1e-15);
  EXPECT_THROW(modal_constants(0, beam), UsageError);
}

TEST(Modal, ResonantLimitIsContinuous) {
  for (double w : {1.0, 4.0}) {
    for (double t : {0.3, 1.2, kPi / 2}) {
      EXPECT_NEAR(modal_bracket(w, 1.0 - 1e-6, t), resonant_bracket(w, t), 1e-4);
    }
  }
  EXPECT_NEAR(resonant_bracket(1.0, kPi / 2), 0.5, 1e-15);
}

TEST(Analytical, BoundaryAndInitialConditions) {
  const BeamConfig beam;
  for (double t : {0.0, 0.4, kPi / 2}) {
    EXPECT_EQ(analytical_deflection(0.0, t, beam), 0.0);
    EXPECT_NEAR(analytical_deflection(kPi, t, beam), 0.0, 1e-12);
  }
  for (double x : {0.5, 1.5, 3.0}) EXPECT_EQ(analytical_deflection(x, 0.0, beam), 0.0);
}

// Reference value from an independent 10^6-term evaluation.
TEST(Analytical, GoldenMidspanAtFinalTime) {
  const BeamConfig beam;
  EXPECT_NEAR(analytical_deflection(kPi / 2, kPi / 2, beam), 0.3314521116706366, 1e-6);
}

TEST(Analytical, ScalesLinearlyWithLoad) {
  BeamConfig beam;
  const double base = analytical_deflection(1.0, 1.0, beam);
  beam.p = 4.0;
  EXPECT_NEAR(analytical_deflection(1.0, 1.0, beam), 4.0 * base, 1e-14);
}

TEST(Analytical, NonResonantSpeedMatchesDirectFormula) {
  // v = 0.5: no mode is resonant; a hand-written sum is the oracle.
  BeamConfig beam;
  beam.v = 0.5;
  const double x = 1.2, t = 1.4;
  double want = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double om = n * 0.5, w = n * n, s = om / w;
    want += (2.0 / kPi) / (w * w) * std::sin(n * x) * (std::sin(om * t) - s * std::sin(w * t)) / (1 - s * s);
  }
  EXPECT_NEAR(analytical_deflection(x, t, beam), want, 1e-12);
}

TEST(RelativeError, Examples) {
  const std::vector<double> truth{1.0, 1.0};
  const std::vector<double> same{1.0, 1.0};
  const std::vector<double> zeros{0.0, 0.0};
  const std::vector<double> off{1.0, 2.0};
  EXPECT_EQ(relative_error_percent(same, truth), 0.0);
  EXPECT_NEAR(relative_error_percent(zeros, truth), 100.0, 1e-12);
  EXPECT_NEAR(relative_error_percent(off, truth), 100.0 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(relative_error_percent(truth, zeros), MetricError);
  EXPECT_THROW(relative_error_percent(std::vector<double>{1.0}, truth), UsageError);
  EXPECT_THROW(relative_error_percent(std::vector<double>{}, std::vector<double>{}), UsageError);
}

TEST(BeamConfig, Validation) {
  BeamConfig beam;
  EXPECT_NO_THROW(beam.validate());
  beam.c_e = 0.1;
  EXPECT_THROW(beam.validate(), ConfigError);
  beam = BeamConfig{};
  beam.t_end = 4.0;
  EXPECT_THROW(beam.validate(), ConfigError);
  beam = BeamConfig{};
  beam.ei = -1.0;
  EXPECT_THROW(beam.validate(), ConfigError);
}

}  // namespace
}  // namespace beampinn
