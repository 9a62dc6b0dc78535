// Taylor jets and the scalar tape.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "beampinn/jet.hpp"
#include "beampinn/tape.hpp"
#include "finite_difference.hpp"

namespace beampinn {
namespace {

using J = Jet<double>;

TEST(JetSeed, VariableHasUnitSlope) {
  const J a = J::variable(2.0, 4);
  EXPECT_EQ(a.order(), 4);
  const std::array<double, 5> want{2, 1, 0, 0, 0};
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(a[k], want[static_cast<std::size_t>(k)]);

  const J b = J::variable(0.0, 2);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[1], 1.0);
  EXPECT_EQ(b[2], 0.0);

  const J c = J::variable(-1.5, 4);
  EXPECT_EQ(c[0], -1.5);
  EXPECT_EQ(c[1], 1.0);
}

TEST(JetSeed, ConstantHasNoDerivatives) {
  const J a = J::constant(3.0, 4);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(a[k], 0.0);
  EXPECT_EQ(a[0], 3.0);
  const J sum = J::constant(5.0, 4) + J::variable(1.0, 4);
  EXPECT_EQ(sum.derivative(1), 1.0);
  EXPECT_EQ(sum.value(), 6.0);
}

TEST(JetSeed, RejectsUnsupportedOrder) {
  EXPECT_THROW(J::variable(1.0, 0), ConfigError);
  EXPECT_THROW(J::variable(1.0, 5), ConfigError);
  EXPECT_THROW(J::constant(1.0, -1), ConfigError);
}

TEST(JetArith, FourthPowerDerivatives) {
  const J x = J::variable(2.0, 4);
  const J f = square(square(x));
  EXPECT_DOUBLE_EQ(f.derivative(0), 16.0);
  EXPECT_DOUBLE_EQ(f.derivative(1), 32.0);
  EXPECT_DOUBLE_EQ(f.derivative(2), 48.0);
  EXPECT_DOUBLE_EQ(f.derivative(3), 48.0);
  EXPECT_DOUBLE_EQ(f.derivative(4), 24.0);
}

TEST(JetArith, TanhMaclaurin) {
  const J u = tanh(J::variable(0.0, 4));
  EXPECT_DOUBLE_EQ(u.derivative(1), 1.0);
  EXPECT_DOUBLE_EQ(u.derivative(2), 0.0);
  EXPECT_DOUBLE_EQ(u.derivative(3), -2.0);
  EXPECT_DOUBLE_EQ(u.derivative(4), 0.0);
}

TEST(JetArith, ExpAtZero) {
  const J e = exp(J::variable(0.0, 2));
  EXPECT_DOUBLE_EQ(e.derivative(1), 1.0);
  EXPECT_DOUBLE_EQ(e.derivative(2), 1.0);
}

TEST(JetArith, OrderMismatchIsUsageError) {
  EXPECT_THROW(J::variable(1.0, 2) * J::variable(1.0, 4), UsageError);
  EXPECT_THROW(J::variable(1.0, 2) + J::variable(1.0, 3), UsageError);
  const J a = J::variable(1.0, 2);
  EXPECT_THROW(jet_apply(JetOp::kMul, a), UsageError);
}

TEST(JetArith, ApplyDispatch) {
  const J a = J::variable(0.5, 3);
  const J b = J::variable(-0.25, 3);
  EXPECT_EQ(jet_apply(JetOp::kAdd, a, &b).coeffs(), (a + b).coeffs());
  EXPECT_EQ(jet_apply(JetOp::kSub, a, &b).coeffs(), (a - b).coeffs());
  EXPECT_EQ(jet_apply(JetOp::kScale, a, static_cast<const J*>(nullptr), 3.0).coeffs(), (a * 3.0).coeffs());
  EXPECT_EQ(jet_apply(JetOp::kSquare, a).coeffs(), (a * a).coeffs());
}

TEST(JetExtract, DerivativeIsFactorialTimesCoefficient) {
  EXPECT_EQ(J::variable(2.0, 4).derivative(0), 2.0);
  const J half = J::from_coeffs({0.0, 0.0, 0.5, 0.0, 0.0}, 2);
  EXPECT_DOUBLE_EQ(half.derivative(2), 1.0);
  EXPECT_THROW(half.derivative(3), UsageError);
  EXPECT_THROW(half.derivative(-1), UsageError);
}

TEST(JetProperty, PolynomialsAreExact) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<double, 5> c{coef(gen), coef(gen), coef(gen), coef(gen), coef(gen)};
    const double a = coef(gen);
    const J x = J::variable(a, 4);
    // Horner on jets.
    J p = J::constant(c[4], 4);
    for (int i = 3; i >= 0; --i) p = p * x + c[static_cast<std::size_t>(i)];
    const double d1 = c[1] + 2 * c[2] * a + 3 * c[3] * a * a + 4 * c[4] * a * a * a;
    const double d2 = 2 * c[2] + 6 * c[3] * a + 12 * c[4] * a * a;
    const double d3 = 6 * c[3] + 24 * c[4] * a;
    const double d4 = 24 * c[4];
    EXPECT_NEAR(p.derivative(1), d1, 1e-13);
    EXPECT_NEAR(p.derivative(2), d2, 1e-13);
    EXPECT_NEAR(p.derivative(3), d3, 1e-13);
    EXPECT_NEAR(p.derivative(4), d4, 1e-13);
  }
}

TEST(JetProperty, MultiplicationCommutes) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const J a = J::from_coeffs({u(gen), u(gen), u(gen), u(gen), u(gen)}, 4);
    const J b = J::from_coeffs({u(gen), u(gen), u(gen), u(gen), u(gen)}, 4);
    const J ab = a * b, ba = b * a;
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(ab[k], ba[k], 1e-14);
  }
}

// Random tanh/exp compositions against high-order central differences.
TEST(JetProperty, TanhCompositionsMatchFiniteDifferences) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double w1 = u(gen), w2 = u(gen), w3 = u(gen), b = u(gen);
    auto f = [&](auto x) { return tanh(tanh(x * w1 + b) * w2 + x * x * w3) * exp(x * 0.3); };
    const double a = u(gen);
    const J jet = f(J::variable(a, 4));
    auto scalar = [&](double x) {
      using std::exp;
      using std::tanh;
      return f(x);
    };
    for (int k = 1; k <= 4; ++k) {
      const double fd = testing::central_derivative(scalar, a, k);
      const double tol = k <= 2 ? 1e-5 : 1e-3;
      EXPECT_LE(testing::relative_gap(jet.derivative(k), fd), tol) << "order " << k << " trial " << trial;
    }
  }
}

TEST(TapeGradient, SquareOfParameter) {
  const std::vector<double> theta{3.0};
  const auto g = loss_gradient([](std::span<const Var> p) { return p[0] * p[0]; }, theta);
  ASSERT_EQ(g.size(), 1U);
  EXPECT_DOUBLE_EQ(g[0], 6.0);
}

TEST(TapeGradient, IndependentParameterHasZeroGradient) {
  const std::vector<double> theta{1.5, -2.0, 0.25};
  const auto g = loss_gradient(
      [](std::span<const Var> p) { return tanh(p[0]) * exp(p[2]); }, theta);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_NEAR(g[0], (1 - std::pow(std::tanh(1.5), 2)) * std::exp(0.25), 1e-15);
  EXPECT_NEAR(g[2], std::tanh(1.5) * std::exp(0.25), 1e-15);
}

TEST(TapeGradient, NonFiniteLossIsTrainingError) {
  const std::vector<double> theta{0.0};
  EXPECT_THROW(loss_gradient([](std::span<const Var> p) { return Var(1.0) / p[0]; }, theta),
               TrainingError);
}

TEST(TapeGradient, ThroughJetCoefficients) {
  // d/dw of the 3rd x-derivative of tanh(w x) at x = 0.4.
  const std::vector<double> theta{0.7};
  auto loss = [](std::span<const Var> p) {
    const Jet<Var> x = Jet<Var>::variable(Var(0.4), 4);
    return tanh(x * p[0]).derivative(3);
  };
  const auto g = loss_gradient(loss, theta);
  auto value = [](double w) { return tanh(J::variable(0.4, 4) * w).derivative(3); };
  const double fd = (value(0.7 + 1e-6) - value(0.7 - 1e-6)) / 2e-6;
  EXPECT_NEAR(g[0], fd, 1e-7);
}

TEST(TapeGradient, Deterministic) {
  const std::vector<double> theta{0.3, -0.8};
  auto loss = [](std::span<const Var> p) { return tanh(p[0] * p[1]) * p[0]; };
  EXPECT_EQ(loss_gradient(loss, theta), loss_gradient(loss, theta));
}

}  // namespace
}  // namespace beampinn
