#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "beampinn/reference_solver.hpp"

namespace beampinn {
namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson, the quadrature oracle for the modal projection.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-13, 40);
}

TEST(ModalForce, MatchesAdaptiveQuadrature) {
  const BeamConfig beam;
  const DeltaModel g;
  for (int n : {1, 2, 5}) {
    for (double t : {0.0, 0.7}) {
      auto f = [&](double x) {
        return gaussian_delta(x - beam.v * t, 0.0, g.sigma) * std::sin(n * kPi * x / beam.length);
      };
      const double want = 2.0 * beam.p / (beam.m * beam.length) * integrate(f, 0.0, beam.length);
      // Composite Simpson error grows like n^4; the n = 2, t = 0 case is held to 1e-8.
      const double tol = (n == 2 && t == 0.0) ? 1e-8 : 1e-6;
      EXPECT_NEAR(modal_force(n, t, beam, g), want, tol) << n << " " << t;
    }
  }
}

TEST(ModalForce, SiftsForNarrowLoads) {
  const BeamConfig beam;
  const DeltaModel g = DeltaModel::gaussian(1e-4);
  for (int n : {1, 3, 7}) {
    for (double t : {0.3, 1.0, 1.5}) {
      const double want = 2.0 / kPi * std::sin(n * kPi * beam.v * t / beam.length);
      EXPECT_NEAR(modal_force(n, t, beam, g), want, 1e-4);
    }
  }
}

TEST(ModalForce, BatchedAgreesWithSingle) {
  const BeamConfig beam;
  const DeltaModel g = DeltaModel::gaussian(0.05, 0.1);
  std::vector<double> forces(30);
  modal_forces(0.8, beam, g, forces);
  for (int n = 1; n <= 30; ++n)
    EXPECT_NEAR(forces[static_cast<std::size_t>(n - 1)], modal_force(n, 0.8, beam, g), 1e-12);
}

TEST(SolveReference, ZeroLoadStaysAtRest) {
  BeamConfig beam;
  beam.p = 0.0;
  const ModalSolution s = solve_reference(beam, DeltaModel{}, {20, 1e-2, 64});
  for (double x : {0.4, 1.6})
    for (double t : {0.0, 0.75, kPi / 2}) EXPECT_EQ(s.deflection(x, t), 0.0);
}

TEST(SolveReference, HitsFinalTimeExactly) {
  const BeamConfig beam;
  const ModalSolution s = solve_reference(beam, DeltaModel{}, {10, 0.013, 64});
  EXPECT_NEAR(s.time(s.n_samples() - 1), beam.t_end, 1e-14);
  EXPECT_LE(s.dt(), 0.013);
}

TEST(SolveReference, BoundaryAndInitialZeros) {
  const BeamConfig beam;
  const ModalSolution s = solve_reference(beam, DeltaModel{}, {30, 1e-2, 64});
  for (double t : {0.0, 0.5, kPi / 2}) {
    EXPECT_EQ(s.deflection(0.0, t), 0.0);
    EXPECT_NEAR(s.deflection(kPi, t), 0.0, 1e-13);
  }
  for (double x : {0.5, 2.0}) EXPECT_EQ(s.deflection(x, 0.0), 0.0);
}

// Cross-check against the closed-form series, which shares no code with the solver.
TEST(SolveReference, NarrowLoadApproachesTheDiracSeries) {
  const BeamConfig beam;
  const ModalSolution s = solve_reference(beam, DeltaModel::gaussian(1e-3), {40, 2e-3, 64});
  for (double x : {kPi / 4, kPi / 2})
    for (double t : {0.6, kPi / 2})
      EXPECT_NEAR(s.deflection(x, t), analytical_deflection(x, t, beam, 40), 2e-5) << x << " " << t;
}

TEST(SolveReference, HermiteInterpolationBetweenSamples) {
  const BeamConfig beam;
  const ModalSolution coarse = solve_reference(beam, DeltaModel{}, {8, 2e-2, 64});
  const ModalSolution fine = solve_reference(beam, DeltaModel{}, {8, 1e-3, 64});
  EXPECT_NEAR(coarse.deflection(1.3, 0.911), fine.deflection(1.3, 0.911), 1e-6);
}

TEST(SolveReference, Guards) {
  const BeamConfig beam;
  EXPECT_THROW(solve_reference(beam, DeltaModel::discrete()), ConfigError);
  EXPECT_THROW(solve_reference(beam, DeltaModel{}, {0, 1e-3, 64}), ConfigError);
  EXPECT_THROW(solve_reference(beam, DeltaModel{}, {10, 0.0, 64}), ConfigError);
  // omega_200 = 40000: a 1e-2 step would need 800 substeps.
  EXPECT_THROW(solve_reference(beam, DeltaModel{}, {200, 1e-2, 64}), ConfigError);
}

}  // namespace
}  // namespace beampinn
