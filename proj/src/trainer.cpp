#include "beampinn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace beampinn {
namespace {

struct Coords {
  std::vector<double> x;
  std::vector<double> t;
};

template <class P>
Coords split(const std::vector<P>& points) {
  Coords c;
  c.x.reserve(points.size());
  c.t.reserve(points.size());
  for (const auto& p : points) {
    c.x.push_back(p.x);
    c.t.push_back(p.t);
  }
  return c;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw TrainingError(std::string("non-finite ") + what + " loss");
}

Eigen::Map<const Eigen::ArrayXd> as_array(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

taylor::Coeffs<Eigen::ArrayXd> zero_adjoints(Eigen::Index n, int order) {
  taylor::Coeffs<Eigen::ArrayXd> adj;
  for (int k = 0; k <= order; ++k) adj[static_cast<std::size_t>(k)] = Eigen::ArrayXd::Zero(n);
  return adj;
}

// Shared by the value-only and value+gradient entry points.
LossBreakdown evaluate(const MlpParams& params, const SampleSet& samples, const BeamConfig& beam,
                       const TrainConfig& cfg, std::span<double> grad, bool want_grad) {
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  const double p = effective_load(params, beam);
  const LossWeights& lam = cfg.lambda;
  const bool aug = cfg.augmented_conditions;
  LossBreakdown out;
  double dload = 0.0;

  if (!samples.interior.empty()) {
    const Coords c = split(samples.interior);
    const auto n = static_cast<Eigen::Index>(c.x.size());
    Eigen::ArrayXd forcing(n);
    for (Eigen::Index i = 0; i < n; ++i)
      forcing(i) = load_shape(c.x[static_cast<std::size_t>(i)], c.t[static_cast<std::size_t>(i)], beam, cfg.delta);
    JetBatch along_x;
    JetBatch along_t;
    along_x.forward(params, c.x, c.t, Axis::kX, 4);
    along_t.forward(params, c.x, c.t, Axis::kT, 2);
    const Eigen::ArrayXd u_xxxx = 24.0 * along_x.output(4);
    const Eigen::ArrayXd u_tt = 2.0 * along_t.output(2);
    const Eigen::ArrayXd r = beam.m * u_tt + beam.ei * u_xxxx - p * forcing;
    out.l_pde = r.square().sum();
    out.mean_pde = out.l_pde / static_cast<double>(n);
    check_finite(out.l_pde, "PDE");
    if (want_grad) {
      auto ax = zero_adjoints(n, 4);
      ax[4] = lam.pde * 2.0 * beam.ei * 24.0 * r;
      along_x.backward(params, ax, grad);
      auto at = zero_adjoints(n, 2);
      at[2] = lam.pde * 2.0 * beam.m * 2.0 * r;
      along_t.backward(params, at, grad);
      dload += -lam.pde * 2.0 * (r * forcing).sum();
    }
  }

  if (!samples.boundary.empty()) {
    const Coords c = split(samples.boundary);
    const auto n = static_cast<Eigen::Index>(c.x.size());
    const int order = aug ? 2 : 0;
    JetBatch b;
    b.forward(params, c.x, c.t, Axis::kX, order);
    const Eigen::ArrayXd& u = b.output(0);
    out.l_bc = u.square().sum();
    Eigen::ArrayXd u_xx;
    if (aug) {
      u_xx = 2.0 * b.output(2);
      out.l_bc += u_xx.square().sum();
    }
    out.mean_bc = out.l_bc / static_cast<double>(n);
    check_finite(out.l_bc, "boundary");
    if (want_grad) {
      auto adj = zero_adjoints(n, order);
      adj[0] = lam.bc * 2.0 * u;
      if (aug) adj[2] = lam.bc * 2.0 * u_xx * 2.0;
      b.backward(params, adj, grad);
    }
  }

  if (!samples.initial.empty()) {
    const Coords c = split(samples.initial);
    const auto n = static_cast<Eigen::Index>(c.x.size());
    const int order = aug ? 1 : 0;
    JetBatch b;
    b.forward(params, c.x, c.t, Axis::kT, order);
    const Eigen::ArrayXd& u = b.output(0);
    out.l_ic = u.square().sum();
    if (aug) out.l_ic += b.output(1).square().sum();
    out.mean_ic = out.l_ic / static_cast<double>(n);
    check_finite(out.l_ic, "initial");
    if (want_grad) {
      auto adj = zero_adjoints(n, order);
      adj[0] = lam.ic * 2.0 * u;
      if (aug) adj[1] = lam.ic * 2.0 * b.output(1);
      b.backward(params, adj, grad);
    }
  }

  if (!samples.data.empty()) {
    Coords c;
    std::vector<double> target;
    for (const DataPoint& d : samples.data) {
      c.x.push_back(d.x);
      c.t.push_back(d.t);
      target.push_back(d.u);
    }
    const auto n = static_cast<Eigen::Index>(c.x.size());
    JetBatch b;
    b.forward(params, c.x, c.t, Axis::kX, 0);
    const Eigen::ArrayXd diff = b.output(0) - as_array(target);
    out.l_data = diff.square().sum();
    out.mean_data = out.l_data / static_cast<double>(n);
    check_finite(out.l_data, "data");
    if (want_grad) {
      auto adj = zero_adjoints(n, 0);
      adj[0] = 2.0 * diff;
      b.backward(params, adj, grad);
    }
  }

  out.total = lam.pde * out.l_pde + lam.ic * out.l_ic + lam.bc * out.l_bc + out.l_data;
  check_finite(out.total, "total");
  if (want_grad && params.has_load()) grad[params.load_index()] = dload;
  return out;
}

std::vector<double> predict(const MlpParams& params, const std::vector<double>& xs,
                            const std::vector<double>& ts) {
  JetBatch b;
  b.forward(params, xs, ts, Axis::kX, 0);
  const Eigen::ArrayXd& u = b.output(0);
  return {u.data(), u.data() + u.size()};
}

Field predict_field(const MlpParams& params, const Field& grid) {
  std::vector<double> xs, ts;
  for (double t : grid.ts)
    for (double x : grid.xs) {
      xs.push_back(x);
      ts.push_back(t);
    }
  Field f = grid;
  f.u = predict(params, xs, ts);
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::kForward ? "forward" : "inverse"; }

Mode mode_from_string(const std::string& name) {
  if (name == "forward") return Mode::kForward;
  if (name == "inverse") return Mode::kInverse;
  throw ConfigError("unknown mode '" + name + "' (expected forward or inverse)");
}

void TrainConfig::validate() const {
  arch.validate();
  delta.validate();
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (lambda.pde < 0.0 || lambda.ic < 0.0 || lambda.bc < 0.0)
    throw ConfigError("loss weights must be >= 0");
  if (n_int < 0 || n_b < 0 || n_in < 0 || n_data < 0) throw ConfigError("point counts must be >= 0");
  if (n_b % 2 != 0) throw ConfigError("n_b must be even");
}

double effective_load(const MlpParams& params, const BeamConfig& beam) {
  return params.has_load() ? params.load() : beam.p;
}

LossBreakdown assemble_loss(const MlpParams& params, const SampleSet& samples,
                            const BeamConfig& beam, const TrainConfig& cfg) {
  return evaluate(params, samples, beam, cfg, {}, false);
}

LossBreakdown loss_and_gradient(const MlpParams& params, const SampleSet& samples,
                                const BeamConfig& beam, const TrainConfig& cfg,
                                std::span<double> grad) {
  if (grad.size() != params.size()) throw UsageError("gradient buffer size mismatch");
  return evaluate(params, samples, beam, cfg, grad, true);
}

Var tape_total_loss(const Architecture& arch, std::span<const Var> theta, bool has_load,
                    const SampleSet& samples, const BeamConfig& beam, const TrainConfig& cfg) {
  const auto net = theta.first(arch.parameter_count());
  const Var p = has_load ? theta.back() : Var(beam.p);
  const bool aug = cfg.augmented_conditions;
  using J = Jet<Var>;
  auto eval = [&](double x, double t, Axis axis, int order) {
    const J jx = axis == Axis::kX ? J::variable(Var(x), order) : J::constant(Var(x), order);
    const J jt = axis == Axis::kT ? J::variable(Var(t), order) : J::constant(Var(t), order);
    return forward_flat<Var, J>(arch, net, jx, jt);
  };

  Var l_pde(0.0), l_bc(0.0), l_ic(0.0), l_data(0.0);
  for (const Point& pt : samples.interior) {
    const Var u_xxxx = eval(pt.x, pt.t, Axis::kX, 4).derivative(4);
    const Var u_tt = eval(pt.x, pt.t, Axis::kT, 2).derivative(2);
    const Var r = Var(beam.m) * u_tt + Var(beam.ei) * u_xxxx - p * Var(load_shape(pt.x, pt.t, beam, cfg.delta));
    l_pde = l_pde + r * r;
  }
  for (const Point& pt : samples.boundary) {
    const J j = eval(pt.x, pt.t, Axis::kX, 2);
    l_bc = l_bc + j.value() * j.value();
    if (aug) l_bc = l_bc + j.derivative(2) * j.derivative(2);
  }
  for (const Point& pt : samples.initial) {
    const J j = eval(pt.x, pt.t, Axis::kT, 1);
    l_ic = l_ic + j.value() * j.value();
    if (aug) l_ic = l_ic + j.derivative(1) * j.derivative(1);
  }
  for (const DataPoint& d : samples.data) {
    const Var diff = forward_flat<Var, Var>(arch, net, Var(d.x), Var(d.t)) - Var(d.u);
    l_data = l_data + diff * diff;
  }
  return Var(cfg.lambda.pde) * l_pde + Var(cfg.lambda.ic) * l_ic + Var(cfg.lambda.bc) * l_bc + l_data;
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               double lr, const AdamOptions& options) {
  if (params.size() != grads.size() || state.m.size() != params.size())
    throw UsageError("adam_step: parameter, gradient and state sizes differ");
  ++state.step;
  const double c1 = 1.0 - std::pow(options.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(options.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = options.beta1 * state.m[i] + (1.0 - options.beta1) * grads[i];
    state.v[i] = options.beta2 * state.v[i] + (1.0 - options.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + options.eps);
  }
}

TrainResult train(const BeamConfig& beam, const TrainConfig& cfg, const FieldFn& oracle,
                  std::vector<DataPoint> data, std::string oracle_name) {
  const auto start = std::chrono::steady_clock::now();
  beam.validate();
  cfg.validate();
  if (cfg.arch.inputs != 2) throw ConfigError("beam training needs a 2-input network");
  if (cfg.mode == Mode::kInverse && data.empty())
    throw ConfigError("inverse mode needs sensor data");

  SampleSet samples = sample_training_points(beam, cfg.n_int, cfg.n_b, cfg.n_in, cfg.seed);
  samples.data = std::move(data);

  MlpParams params = init_params(cfg.arch, cfg.seed);
  if (cfg.mode == Mode::kInverse) params.enable_load(cfg.p_init);

  RunReport report;
  report.seed = cfg.seed;
  report.experiment = to_string(cfg.mode);
  report.oracle = std::move(oracle_name);
  report.config = cfg;
  report.beam = beam;
  report.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

  std::vector<double> grad(params.size());
  AdamState state(params.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossBreakdown loss;
    try {
      loss = loss_and_gradient(params, samples, beam, cfg, grad);
    } catch (const TrainingError& e) {
      throw TrainingError(std::string(e.what()) + " at epoch " + std::to_string(epoch), epoch);
    }
    if (epoch == 0) report.initial = loss;
    report.loss_trace.push_back(loss.total);
    adam_step(state, params.flat(), grad, cfg.learning_rate);
  }
  try {
    report.final = assemble_loss(params, samples, beam, cfg);
  } catch (const TrainingError& e) {
    throw TrainingError(std::string(e.what()) + " at epoch " + std::to_string(cfg.epochs), cfg.epochs);
  }
  if (cfg.epochs == 0) report.initial = report.final;
  report.loss_trace.push_back(report.final.total);
  if (params.has_load()) report.predicted_p = params.load();

  const Field truth = sample_field(beam, oracle);
  Field field = predict_field(params, truth);
  report.relative_error_final = relative_error_percent(field.final_slice(), truth.final_slice());
  report.relative_error_grid = relative_error_percent(field.u, truth.u);
  for (std::size_t it = 0; it < truth.nt(); ++it) {
    const std::vector<double> ts = truth.slice(it);
    const bool zero = std::all_of(ts.begin(), ts.end(), [](double v) { return v == 0.0; });
    report.relative_error_per_time.push_back(
        zero ? std::numeric_limits<double>::quiet_NaN()
             : relative_error_percent(field.slice(it), ts));
  }
  report.wall_seconds = seconds_since(start);
  return {std::move(report), std::move(params), std::move(field)};
}

DeltaFitResult fit_delta_dnn(double sigma, const TrainConfig& cfg, std::optional<MlpParams> initial) {
  const auto start = std::chrono::steady_clock::now();
  if (!(sigma > 0.0)) throw ConfigError("delta-fit needs sigma > 0");
  cfg.validate();
  Architecture arch = cfg.arch;
  arch.inputs = 1;
  MlpParams params = initial ? std::move(*initial) : init_params(arch, cfg.seed);
  if (params.arch().inputs != 1) throw ConfigError("delta-fit network must have a single input");

  const int n = kDeltaFitGrid;
  const double a = -kDeltaFitHalfWidth;
  const double h = 2.0 * kDeltaFitHalfWidth / (n - 1);
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> target(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = a + i * h;
    target[static_cast<std::size_t>(i)] = gaussian_delta(xs[static_cast<std::size_t>(i)], 0.0, sigma);
  }
  const std::vector<double> none;
  const Eigen::Map<const Eigen::ArrayXd> y(target.data(), n);

  DeltaFitResult result{RunReport{}, params, {}, {}, {}};
  RunReport& report = result.report;
  report.seed = cfg.seed;
  report.experiment = "delta-fit";
  report.oracle = "gaussian closed form";
  report.config = cfg;
  report.config.arch = arch;
  report.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

  std::vector<double> grad(params.size());
  AdamState state(params.size());
  JetBatch batch;
  auto loss_at = [&](bool with_grad) {
    batch.forward(params, xs, none, Axis::kX, 0);
    const Eigen::ArrayXd diff = batch.output(0) - y;
    LossBreakdown l;
    l.l_data = diff.square().sum();
    l.mean_data = l.l_data / n;
    l.total = l.l_data;
    if (with_grad) {
      std::fill(grad.begin(), grad.end(), 0.0);
      taylor::Coeffs<Eigen::ArrayXd> adj;
      adj[0] = 2.0 * diff;
      batch.backward(params, adj, grad);
    }
    return l;
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const LossBreakdown l = loss_at(true);
    if (!std::isfinite(l.total)) throw TrainingError("non-finite delta-fit loss at epoch " + std::to_string(epoch), epoch);
    if (epoch == 0) report.initial = l;
    report.loss_trace.push_back(l.total);
    adam_step(state, params.flat(), grad, cfg.learning_rate);
  }
  report.final = loss_at(false);
  if (!std::isfinite(report.final.total)) throw TrainingError("non-finite delta-fit loss", cfg.epochs);
  if (cfg.epochs == 0) report.initial = report.final;
  report.loss_trace.push_back(report.final.total);

  for (int i = 0; i + 1 < n; ++i) result.eval_x.push_back(a + (i + 0.5) * h);
  for (double x : result.eval_x) result.eval_truth.push_back(gaussian_delta(x, 0.0, sigma));
  batch.forward(params, result.eval_x, none, Axis::kX, 0);
  result.eval_pred.assign(batch.output(0).data(), batch.output(0).data() + batch.output(0).size());
  report.relative_error_final = relative_error_percent(result.eval_pred, result.eval_truth);
  // Training-grid R, a diagnostic beside the held-out value.
  batch.forward(params, xs, none, Axis::kX, 0);
  {
    const Eigen::ArrayXd on_grid = batch.output(0);
    report.relative_error_grid = relative_error_percent({on_grid.data(), static_cast<std::size_t>(n)}, target);
  }
  result.params = std::move(params);
  report.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace beampinn
