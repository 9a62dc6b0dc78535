// beampinn: train, evaluate and cross-check PINN solutions of the moving-load beam.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "beampinn/config.hpp"
#include "beampinn/field_io.hpp"
#include "beampinn/reference_solver.hpp"
#include "beampinn/report.hpp"
#include "beampinn/sampling.hpp"
#include "beampinn/trainer.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace beampinn;

namespace {

enum Exit { kOk = 0, kConfig = 2, kDiverged = 3, kIo = 4 };

// Knobs shared by forward and inverse runs; unset ones leave the config alone.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> p;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::string field_csv, report_json, checkpoint;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--p", o.p, "True load magnitude");
  cmd->add_option("--epochs", o.epochs, "Training epochs");
  cmd->add_option("--lr", o.lr, "Adam learning rate");
  cmd->add_option("--field-csv", o.field_csv, "Output field CSV (overrides config)");
  cmd->add_option("--report", o.report_json, "Output report JSON (overrides config)");
  cmd->add_option("--checkpoint", o.checkpoint, "Output checkpoint (overrides config)");
}

void apply(const Overrides& o, ExperimentConfig& cfg) {
  if (o.seed) cfg.train.seed = *o.seed;
  if (o.p) cfg.beam.p = *o.p;
  if (o.epochs) cfg.train.epochs = *o.epochs;
  if (o.lr) cfg.train.learning_rate = *o.lr;
  if (!o.field_csv.empty()) cfg.output.field_csv = o.field_csv;
  if (!o.report_json.empty()) cfg.output.report_json = o.report_json;
  if (!o.checkpoint.empty()) cfg.output.checkpoint = o.checkpoint;
  cfg.beam.validate();
  cfg.train.validate();
}

FieldFn make_oracle(const ExperimentConfig& cfg, const std::string& engine) {
  const BeamConfig beam = cfg.beam;
  if (engine == "series") {
    const int n = cfg.oracle.n_terms;
    const double eps = cfg.oracle.resonance_eps;
    return [beam, n, eps](double x, double t) { return analytical_deflection(x, t, beam, n, eps); };
  }
  if (engine == "modal") {
    auto sol = std::make_shared<ModalSolution>(solve_reference(beam, cfg.train.delta, cfg.oracle.reference));
    return [sol](double x, double t) { return sol->deflection(x, t); };
  }
  throw ConfigError("unknown oracle engine '" + engine + "' (expected series or modal)");
}

// The modal engine needs a Gaussian load; discrete runs still compare against it
// with the default width so the oracle is the same physical problem.
ExperimentConfig oracle_config(ExperimentConfig cfg) {
  if (cfg.train.delta.kind != DeltaKind::kGaussian) cfg.train.delta = DeltaModel{};
  return cfg;
}

void write_outputs(const TrainResult& r, const ExperimentConfig& cfg) {
  write_field_csv(cfg.output.field_csv, r.field);
  if (!cfg.output.checkpoint.empty()) save_checkpoint(cfg.output.checkpoint, r.params);
  write_report(cfg.output.report_json, r.report, cfg);
}

void print_summary(const RunReport& r) {
  std::printf("final_loss %.10g\nrelative_error_percent %.10g\nrelative_error_percent_grid %.10g\n",
              r.final.total, r.relative_error_final, r.relative_error_grid);
  if (r.predicted_p) std::printf("predicted_p %.10g\n", *r.predicted_p);
  std::printf("wall_seconds %.3f\n", r.wall_seconds);
}

int run_forward(const std::string& config_path, const std::string& delta, const std::string& engine,
                const Overrides& o) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
  cfg.train.mode = Mode::kForward;
  if (!delta.empty()) {
    const DeltaKind kind = delta_kind_from_string(delta);
    if (kind != cfg.train.delta.kind) cfg.train.delta = kind == DeltaKind::kDiscrete ? DeltaModel::discrete() : DeltaModel{};
  }
  apply(o, cfg);
  const FieldFn oracle = make_oracle(oracle_config(cfg), engine);
  const TrainResult r = train(cfg.beam, cfg.train, oracle, {}, engine);
  write_outputs(r, cfg);
  print_summary(r.report);
  return kOk;
}

std::string resolve_beside(const std::string& path, const std::string& anchor) {
  if (path.empty() || fs::path(path).is_absolute() || fs::exists(path)) return path;
  return (fs::path(anchor).parent_path() / path).string();
}

int run_inverse(const std::string& config_path, const std::string& data_path, const std::string& from_forward,
                const std::string& engine, const Overrides& o) {
  ExperimentConfig cfg = config_path.empty() ? inverse_preset() : load_experiment_config(config_path);
  cfg.train.mode = Mode::kInverse;
  std::vector<DataPoint> data;
  std::string source;
  if (!from_forward.empty()) {
    const SavedReport fwd = read_report(from_forward);
    // The forward run defines the true physics; the inverse run only learns p.
    cfg.beam = fwd.config.beam;
    cfg.train.delta = fwd.config.train.delta;
    apply(o, cfg);
    const std::string ckpt = resolve_beside(fwd.checkpoint, from_forward);
    FieldFn predicted;
    if (!ckpt.empty() && fs::exists(ckpt)) {
      auto net = std::make_shared<MlpParams>(load_checkpoint(ckpt));
      predicted = [net](double x, double t) { return forward(*net, x, t); };
      source = "forward checkpoint " + ckpt;
    } else {
      auto field = std::make_shared<Field>(read_field_csv(resolve_beside(fwd.field_csv, from_forward)));
      predicted = [field](double x, double t) { return field->interpolate(x, t); };
      source = "forward field " + fwd.field_csv + " (bilinear)";
    }
    data = sample_sensor_data(cfg.sensor_locations, cfg.train.n_data, cfg.beam, predicted, cfg.train.seed);
  } else {
    apply(o, cfg);
    data = read_sensor_csv(data_path, cfg.beam);
    source = "csv " + data_path;
  }
  const FieldFn oracle = make_oracle(oracle_config(cfg), engine);
  TrainResult r = train(cfg.beam, cfg.train, oracle, std::move(data), engine);
  r.report.data_source = source;
  write_outputs(r, cfg);
  print_summary(r.report);
  return kOk;
}

int run_oracle(const std::string& config_path, const std::string& engine, std::string out,
               std::optional<double> p, int nx, int nt) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
  if (p) cfg.beam.p = *p;
  cfg.beam.validate();
  if (out.empty()) out = "oracle_" + engine + ".csv";
  const Field f = sample_field(cfg.beam, make_oracle(oracle_config(cfg), engine), nx, nt);
  write_field_csv(out, f);
  std::printf("wrote %s (%zu x %zu)\n", out.c_str(), f.nx(), f.nt());
  return kOk;
}

int run_eval(const std::string& pred_path, const std::string& truth_path, const std::string& abs_err) {
  const Field pred = read_field_csv(pred_path);
  const Field truth = read_field_csv(truth_path);
  if (pred.xs != truth.xs || pred.ts != truth.ts)
    throw UsageError("prediction and truth grids differ (" + std::to_string(pred.nx()) + "x" +
                     std::to_string(pred.nt()) + " vs " + std::to_string(truth.nx()) + "x" +
                     std::to_string(truth.nt()) + ")");
  std::printf("relative_error_percent %.17g\n",
              relative_error_percent(pred.final_slice(), truth.final_slice()));
  std::printf("relative_error_percent_grid %.17g\n", relative_error_percent(pred.u, truth.u));
  if (!abs_err.empty()) {
    Field e = truth;
    for (std::size_t i = 0; i < e.u.size(); ++i) e.u[i] = std::abs(pred.u[i] - truth.u[i]);
    write_field_csv(abs_err, e);
  }
  return kOk;
}

int run_delta_fit(double sigma, const Overrides& o, int hidden, int neurons, const std::string& csv) {
  TrainConfig cfg;
  cfg.arch = {hidden, neurons, 1};
  cfg.epochs = o.epochs.value_or(20000);
  cfg.learning_rate = o.lr.value_or(1e-3);
  cfg.seed = o.seed.value_or(1);
  const DeltaFitResult r = fit_delta_dnn(sigma, cfg);
  const std::string report_path = o.report_json.empty() ? "delta_fit_report.json" : o.report_json;
  nlohmann::json j;
  j["experiment"] = "delta-fit";
  j["sigma"] = sigma;
  j["final_loss"] = r.report.final.total;
  j["l_data"] = r.report.final.l_data;
  j["relative_error_percent"] = r.report.relative_error_final;
  j["relative_error_percent_training_grid"] = r.report.relative_error_grid;
  j["seed"] = cfg.seed;
  j["config"] = {{"hidden_layers", hidden}, {"neurons", neurons}, {"epochs", cfg.epochs},
                 {"learning_rate", cfg.learning_rate}, {"grid", kDeltaFitGrid},
                 {"half_width", kDeltaFitHalfWidth}};
  j["loss_trace"] = r.report.loss_trace;
  j["wall_seconds"] = r.report.wall_seconds;
  std::ofstream os(report_path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + report_path);
  os << j.dump(2) << '\n';
  if (!csv.empty()) {
    std::ofstream c(csv, std::ios::binary);
    if (!c) throw IoError("cannot open for writing: " + csv);
    c << "x,pred,truth\n";
    for (std::size_t i = 0; i < r.eval_x.size(); ++i)
      c << format_real(r.eval_x[i]) << ',' << format_real(r.eval_pred[i]) << ',' << format_real(r.eval_truth[i]) << '\n';
  }
  std::printf("final_loss %.10g\nrelative_error_percent %.10g\nrelative_error_percent_training_grid %.10g\n"
              "wall_seconds %.3f\n",
              r.report.final.total, r.report.relative_error_final, r.report.relative_error_grid,
              r.report.wall_seconds);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PINN solver for a simply supported beam under a moving point load"};
  app.require_subcommand(1);

  std::string config, delta, engine = "series", data, from_forward, out, pred, truth, abs_err, csv;
  Overrides fwd_o, inv_o, fit_o;
  std::optional<double> oracle_p;
  int nx = kEvalGridNx, nt = kEvalGridNt, hidden = 4, neurons = 50;
  double sigma = 0.001;

  CLI::App* fwd = app.add_subcommand("forward", "Train the forward problem");
  fwd->add_option("--config", config, "Experiment JSON");
  fwd->add_option("--delta", delta, "Load model: gaussian or discrete")->check(CLI::IsMember({"gaussian", "discrete"}));
  fwd->add_option("--oracle", engine, "Reference for R: series or modal")->check(CLI::IsMember({"series", "modal"}));
  add_overrides(fwd, fwd_o);

  CLI::App* inv = app.add_subcommand("inverse", "Recover the load magnitude from sensor data");
  inv->add_option("--config", config, "Experiment JSON (default: inverse preset)");
  auto* data_opt = inv->add_option("--data", data, "Sensor CSV with columns x,t,u");
  auto* ff_opt = inv->add_option("--from-forward", from_forward, "Report JSON of a forward run");
  data_opt->excludes(ff_opt);
  inv->add_option("--oracle", engine, "Reference for R: series or modal")->check(CLI::IsMember({"series", "modal"}));
  add_overrides(inv, inv_o);

  CLI::App* orc = app.add_subcommand("oracle", "Write a reference deflection field");
  orc->add_option("--config", config, "Experiment JSON");
  orc->add_option("--engine", engine, "series or modal")->check(CLI::IsMember({"series", "modal"}));
  orc->add_option("--out", out, "Output CSV");
  orc->add_option("--p", oracle_p, "Load magnitude");
  orc->add_option("--nx", nx, "Grid points in x")->check(CLI::Range(2, 100000));
  orc->add_option("--nt", nt, "Grid points in t")->check(CLI::Range(2, 100000));

  CLI::App* ev = app.add_subcommand("eval", "Relative L2 error between two field CSVs");
  ev->add_option("--pred", pred, "Predicted field CSV")->required();
  ev->add_option("--truth", truth, "Reference field CSV")->required();
  ev->add_option("--emit-abs-err", abs_err, "Write |pred - truth| as a field CSV");

  CLI::App* fit = app.add_subcommand("delta-fit", "Regress a narrow Gaussian with a tanh network");
  fit->add_option("--sigma", sigma, "Gaussian width")->check(CLI::PositiveNumber);
  fit->add_option("--hidden-layers", hidden, "Hidden layers");
  fit->add_option("--neurons", neurons, "Neurons per layer");
  fit->add_option("--csv", csv, "Write x,pred,truth on the evaluation grid");
  fit->add_option("--seed", fit_o.seed, "Random seed");
  fit->add_option("--epochs", fit_o.epochs, "Training epochs");
  fit->add_option("--lr", fit_o.lr, "Adam learning rate");
  fit->add_option("--report", fit_o.report_json, "Output report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*fwd) return run_forward(config, delta, engine, fwd_o);
    if (*inv) {
      if (data.empty() && from_forward.empty()) throw ConfigError("inverse needs --data or --from-forward");
      return run_inverse(config, data, from_forward, engine, inv_o);
    }
    if (*orc) return run_oracle(config, engine, out, oracle_p, nx, nt);
    if (*ev) return run_eval(pred, truth, abs_err);
    if (*fit) return run_delta_fit(sigma, fit_o, hidden, neurons, csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kConfig;
  } catch (const MetricError& e) {
    std::cerr << "metric error: " << e.what() << '\n';
    return kConfig;
  } catch (const TrainingError& e) {
    std::cerr << "training diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
