#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beampinn/trainer.hpp"

namespace beampinn {
namespace {

constexpr double kPi = std::numbers::pi;

// 16 points per family, drawn independently of the library sampler.
SampleSet small_samples(const BeamConfig& beam, bool with_data) {
  SampleSet s;
  for (int i = 0; i < 16; ++i) {
    const double a = (i + 0.37) / 16.0, b = std::fmod(0.618 * (i + 1), 1.0);
    s.interior.push_back({a * beam.length, b * beam.t_end});
    s.boundary.push_back({i % 2 ? beam.length : 0.0, b * beam.t_end});
    s.initial.push_back({a * beam.length, 0.0});
    if (with_data) s.data.push_back({kPi / 4, b * beam.t_end, 0.1 * b});
  }
  return s;
}

double total_at(const MlpParams& p, const SampleSet& s, const BeamConfig& beam, const TrainConfig& cfg) {
  return assemble_loss(p, s, beam, cfg).total;
}

void check_gradients(const TrainConfig& cfg, bool inverse) {
  const BeamConfig beam;
  const SampleSet s = small_samples(beam, inverse);
  MlpParams p = init_params(cfg.arch, 5);
  if (inverse) p.enable_load(0.3);
  std::vector<double> fast(p.size());
  const LossBreakdown lb = loss_and_gradient(p, s, beam, cfg, fast);
  EXPECT_EQ(lb.total, total_at(p, s, beam, cfg));

  const std::vector<double> tape = loss_gradient(
      [&](std::span<const Var> th) { return tape_total_loss(p.arch(), th, inverse, s, beam, cfg); }, p.flat());

  double scale = 0.0;
  for (double g : tape) scale = std::max(scale, std::abs(g));
  const double h = 1e-4;
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(fast[i], tape[i], 1e-10 * scale) << i;
    MlpParams up = p, dn = p;
    up.flat()[i] += h;
    dn.flat()[i] -= h;
    const double fd = (total_at(up, s, beam, cfg) - total_at(dn, s, beam, cfg)) / (2 * h);
    EXPECT_LE(std::abs(fast[i] - fd) / std::max({std::abs(fd), std::abs(fast[i]), 1e-3 * scale}), 1e-5)
        << "param " << i << " fast " << fast[i] << " fd " << fd;
  }
}

TEST(Gradient, ForwardPresetMatchesTapeAndFiniteDifferences) {
  TrainConfig cfg;
  check_gradients(cfg, false);
}

TEST(Gradient, DeepInverseMatchesTapeAndFiniteDifferences) {
  TrainConfig cfg;
  cfg.arch = {4, 20, 2};
  cfg.mode = Mode::kInverse;
  cfg.lambda = {1.0, 1.0, 1.0};
  check_gradients(cfg, true);
}

TEST(Gradient, PlainConditionsMatchTape) {
  TrainConfig cfg;
  cfg.augmented_conditions = false;
  cfg.arch = {2, 8, 2};
  check_gradients(cfg, false);
}

TEST(Gradient, FlowsToTheLoad) {
  const BeamConfig beam;
  TrainConfig cfg;
  cfg.mode = Mode::kInverse;
  const SampleSet s = small_samples(beam, true);
  MlpParams p = init_params(cfg.arch, 1);
  p.enable_load(0.1);
  std::vector<double> g(p.size());
  const LossBreakdown lb = loss_and_gradient(p, s, beam, cfg, g);
  ASSERT_GT(lb.l_pde, 0.0);
  EXPECT_NE(g[p.load_index()], 0.0);
}

TEST(Loss, ZeroNetworkClosedForms) {
  const BeamConfig beam;
  TrainConfig cfg;
  const SampleSet s = small_samples(beam, false);
  const MlpParams zero(cfg.arch);
  const LossBreakdown lb = assemble_loss(zero, s, beam, cfg);
  double want = 0.0;
  for (const Point& q : s.interior) {
    const double g = gaussian_delta(q.x - beam.v * q.t, 0.0, cfg.delta.sigma);
    want += g * g;
  }
  EXPECT_NEAR(lb.l_pde, want, 1e-12 * want);
  EXPECT_EQ(lb.l_bc, 0.0);
  EXPECT_EQ(lb.l_ic, 0.0);
  EXPECT_EQ(lb.l_data, 0.0);
  EXPECT_NEAR(lb.total, cfg.lambda.pde * want, 1e-11 * want);
  EXPECT_NEAR(lb.mean_pde, want / 16, 1e-12);
}

TEST(Loss, DataTermIsUnweighted) {
  const BeamConfig beam;
  TrainConfig cfg;
  cfg.lambda = {0.0, 0.0, 0.0};
  const SampleSet s = small_samples(beam, true);
  const MlpParams zero(cfg.arch);
  const LossBreakdown lb = assemble_loss(zero, s, beam, cfg);
  double want = 0.0;
  for (const DataPoint& d : s.data) want += d.u * d.u;
  EXPECT_NEAR(lb.l_data, want, 1e-14);
  EXPECT_NEAR(lb.total, want, 1e-14);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  std::vector<double> p{1.0, -2.0};
  const std::vector<double> g{0.0, 0.0};
  AdamState st(2);
  for (int i = 0; i < 5; ++i) adam_step(st, p, g, 1e-3);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], -2.0);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<double> p{0.0, 0.0, 0.0};
  const std::vector<double> g{3.0, -0.5, 1e-3};
  AdamState st(3);
  adam_step(st, p, g, 0.01);
  EXPECT_NEAR(p[0], -0.01, 1e-9);
  EXPECT_NEAR(p[1], 0.01, 1e-9);
  EXPECT_NEAR(p[2], -0.01, 1e-7);
  EXPECT_EQ(st.step, 1);
}

TEST(Train, ZeroEpochsReportsInitialState) {
  BeamConfig beam;
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.n_int = 50;
  cfg.n_b = 10;
  cfg.n_in = 10;
  const FieldFn truth = [&](double x, double t) { return analytical_deflection(x, t, beam); };
  const TrainResult r = train(beam, cfg, truth);
  EXPECT_EQ(r.report.initial.total, r.report.final.total);
  ASSERT_EQ(r.report.loss_trace.size(), 1U);
  EXPECT_EQ(r.params, init_params(cfg.arch, cfg.seed));
  EXPECT_EQ(r.field.nx(), 101U);
  EXPECT_EQ(r.field.nt(), 51U);
  EXPECT_FALSE(r.report.predicted_p.has_value());
  // R recomputed from the saved field.
  std::vector<double> truth_final;
  for (double x : r.field.xs) truth_final.push_back(truth(x, beam.t_end));
  EXPECT_NEAR(relative_error_percent(r.field.final_slice(), truth_final), r.report.relative_error_final, 1e-12);
  EXPECT_TRUE(std::isnan(r.report.relative_error_per_time.front()));
}

TEST(Train, DeterministicAndDescending) {
  BeamConfig beam;
  TrainConfig cfg;
  cfg.epochs = 200;
  const FieldFn truth = [&](double x, double t) { return analytical_deflection(x, t, beam); };
  const TrainResult a = train(beam, cfg, truth);
  const TrainResult b = train(beam, cfg, truth);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.report.loss_trace, b.report.loss_trace);
  EXPECT_EQ(a.report.relative_error_final, b.report.relative_error_final);
  const double lowest = *std::min_element(a.report.loss_trace.begin(), a.report.loss_trace.end());
  EXPECT_LT(lowest, a.report.loss_trace.front());
}

TEST(Train, InverseNeedsData) {
  BeamConfig beam;
  TrainConfig cfg;
  cfg.mode = Mode::kInverse;
  cfg.epochs = 1;
  const FieldFn truth = [](double, double) { return 0.0; };
  EXPECT_THROW(train(beam, cfg, truth), ConfigError);
}

TEST(Train, DivergenceCitesEpoch) {
  BeamConfig beam;
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.learning_rate = 1e300;
  cfg.n_int = 20;
  cfg.n_b = 4;
  cfg.n_in = 4;
  const FieldFn truth = [&](double x, double t) { return analytical_deflection(x, t, beam); };
  try {
    train(beam, cfg, truth);
    FAIL() << "expected divergence";
  } catch (const TrainingError& e) {
    EXPECT_GE(e.epoch(), 0);
  }
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.epochs = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.lambda.ic = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_EQ(mode_from_string(to_string(Mode::kInverse)), Mode::kInverse);
  EXPECT_THROW(mode_from_string("sideways"), ConfigError);
}

TEST(DeltaFit, ZeroNetworkGivesFullError) {
  TrainConfig cfg;
  cfg.arch = {4, 50, 1};
  cfg.epochs = 0;
  const DeltaFitResult r = fit_delta_dnn(0.001, cfg, MlpParams(cfg.arch));
  EXPECT_EQ(r.report.relative_error_final, 100.0);
  EXPECT_EQ(r.eval_x.size(), static_cast<std::size_t>(kDeltaFitGrid - 1));
}

TEST(DeltaFit, ShortRunImproves) {
  TrainConfig cfg;
  cfg.arch = {2, 20, 1};
  cfg.epochs = 300;
  const DeltaFitResult r = fit_delta_dnn(0.05, cfg);
  EXPECT_LT(r.report.final.total, r.report.initial.total);
  EXPECT_LT(r.report.relative_error_final, 100.0);
  EXPECT_THROW(fit_delta_dnn(0.0, cfg), ConfigError);
  EXPECT_THROW(fit_delta_dnn(0.05, cfg, init_params({2, 20, 2}, 1)), ConfigError);
}

}  // namespace
}  // namespace beampinn
