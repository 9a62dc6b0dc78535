#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "beampinn/config.hpp"
#include "beampinn/field_io.hpp"
#include "beampinn/reference_solver.hpp"
#include "beampinn/report.hpp"
#include "beampinn/trainer.hpp"

namespace py = pybind11;
using namespace beampinn;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Elementwise f(x, t) with numpy broadcasting.
template <class F>
py::array_t<double> vectorize2(F&& f, const Array& x, const Array& t) {
  return py::vectorize([&](double a, double b) { return f(a, b); })(x, t);
}

py::dict losses(const LossBreakdown& l) {
  py::dict d;
  d["total"] = l.total;
  d["l_pde"] = l.l_pde;
  d["l_ic"] = l.l_ic;
  d["l_bc"] = l.l_bc;
  d["l_data"] = l.l_data;
  return d;
}

py::array_t<double> grid_array(const Field& f) {
  py::array_t<double> out({f.nt(), f.nx()});
  std::copy(f.u.begin(), f.u.end(), out.mutable_data());
  return out;
}

FieldFn oracle_for(const ExperimentConfig& cfg, const std::string& engine) {
  if (engine == "series") {
    const BeamConfig b = cfg.beam;
    const int n = cfg.oracle.n_terms;
    const double eps = cfg.oracle.resonance_eps;
    return [b, n, eps](double x, double t) { return analytical_deflection(x, t, b, n, eps); };
  }
  if (engine == "modal") {
    const DeltaModel d = cfg.train.delta.kind == DeltaKind::kGaussian ? cfg.train.delta : DeltaModel{};
    auto sol = std::make_shared<ModalSolution>(solve_reference(cfg.beam, d, cfg.oracle.reference));
    return [sol](double x, double t) { return sol->deflection(x, t); };
  }
  throw ConfigError("unknown oracle engine '" + engine + "'");
}

py::dict run_experiment(const std::string& config_json, const std::string& engine,
                        std::optional<std::vector<std::array<double, 3>>> data) {
  const ExperimentConfig cfg = parse_experiment_config(config_json);
  std::vector<DataPoint> rows;
  if (data)
    for (const auto& r : *data) rows.push_back({r[0], r[1], r[2]});
  if (cfg.train.mode == Mode::kInverse && rows.empty())
    rows = sample_sensor_data(cfg.sensor_locations, cfg.train.n_data, cfg.beam, oracle_for(cfg, "series"),
                              cfg.train.seed);
  const FieldFn oracle = oracle_for(cfg, engine);
  TrainResult r = [&] {
    py::gil_scoped_release release;
    return train(cfg.beam, cfg.train, oracle, std::move(rows), engine);
  }();
  py::dict out;
  out["report_json"] = report_json(r.report, cfg);
  out["relative_error_percent"] = r.report.relative_error_final;
  out["relative_error_percent_grid"] = r.report.relative_error_grid;
  out["predicted_p"] = r.report.predicted_p ? py::cast(*r.report.predicted_p) : py::none();
  out["final"] = losses(r.report.final);
  out["initial"] = losses(r.report.initial);
  out["loss_trace"] = r.report.loss_trace;
  out["x"] = r.field.xs;
  out["t"] = r.field.ts;
  out["u"] = grid_array(r.field);
  out["params"] = std::vector<double>(r.params.flat().begin(), r.params.flat().end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_beampinn, m) {
  m.doc() = "PINN solver for a simply supported beam under a moving point load";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricError", PyExc_ArithmeticError);
  py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<BeamConfig>(m, "BeamConfig")
      .def(py::init<>())
      .def_readwrite("m", &BeamConfig::m)
      .def_readwrite("ei", &BeamConfig::ei)
      .def_readwrite("length", &BeamConfig::length)
      .def_readwrite("p", &BeamConfig::p)
      .def_readwrite("v", &BeamConfig::v)
      .def_readwrite("t_end", &BeamConfig::t_end)
      .def("validate", &BeamConfig::validate);

  py::class_<DeltaModel>(m, "DeltaModel")
      .def(py::init<>())
      .def_static("gaussian", &DeltaModel::gaussian, py::arg("sigma"), py::arg("mu") = 0.0)
      .def_static("discrete", &DeltaModel::discrete, py::arg("tol") = 1e-12)
      .def_property_readonly("kind", [](const DeltaModel& d) { return to_string(d.kind); })
      .def_readwrite("mu", &DeltaModel::mu)
      .def_readwrite("sigma", &DeltaModel::sigma)
      .def_readwrite("tol", &DeltaModel::tol);

  m.def(
      "analytical_deflection",
      [](const Array& x, const Array& t, const BeamConfig& beam, int n_terms, double eps) {
        return vectorize2([&](double a, double b) { return analytical_deflection(a, b, beam, n_terms, eps); }, x, t);
      },
      py::arg("x"), py::arg("t"), py::arg("beam") = BeamConfig{}, py::arg("n_terms") = kDefaultSeriesTerms,
      py::arg("resonance_eps") = kDefaultResonanceEps, "Closed-form modal series for the point-loaded beam.");

  m.def(
      "reference_deflection",
      [](const Array& x, const Array& t, const BeamConfig& beam, const DeltaModel& delta, int n_modes, double dt) {
        ModalSolution sol = [&] {
          py::gil_scoped_release release;
          return solve_reference(beam, delta, {n_modes, dt, 64});
        }();
        return vectorize2([&](double a, double b) { return sol.deflection(a, b); }, x, t);
      },
      py::arg("x"), py::arg("t"), py::arg("beam") = BeamConfig{}, py::arg("delta") = DeltaModel{},
      py::arg("n_modes") = 200, py::arg("dt") = 1e-4, "Modal RK4 solution for a Gaussian load.");

  m.def("gaussian_delta", py::vectorize(&gaussian_delta), py::arg("x"), py::arg("mu"), py::arg("sigma"));

  m.def(
      "relative_error_percent",
      [](const Array& pred, const Array& truth) {
        if (pred.size() != truth.size()) throw UsageError("prediction and truth sizes differ");
        return relative_error_percent({pred.data(), static_cast<std::size_t>(pred.size())},
                                      {truth.data(), static_cast<std::size_t>(truth.size())});
      },
      py::arg("pred"), py::arg("truth"));

  m.def(
      "network_derivatives",
      [](const std::vector<double>& params, int hidden_layers, int neurons, double x, double t) {
        const Architecture arch{hidden_layers, neurons, 2};
        const bool has_load = params.size() == arch.parameter_count() + 1;
        const MlpParams p = MlpParams::from_flat(arch, params, has_load);
        const DerivBundle d = forward_with_derivs(p, x, t);
        py::dict out;
        out["u"] = d.u;
        out["u_t"] = d.u_t;
        out["u_tt"] = d.u_tt;
        out["u_x"] = d.u_x;
        out["u_xx"] = d.u_xx;
        out["u_xxxx"] = d.u_xxxx;
        return out;
      },
      py::arg("params"), py::arg("hidden_layers"), py::arg("neurons"), py::arg("x"), py::arg("t"),
      "Network value and the derivatives entering the beam equation.");

  m.def(
      "init_params",
      [](int hidden_layers, int neurons, std::uint64_t seed) {
        const MlpParams p = init_params({hidden_layers, neurons, 2}, seed);
        return std::vector<double>(p.flat().begin(), p.flat().end());
      },
      py::arg("hidden_layers") = 1, py::arg("neurons") = 20, py::arg("seed") = 1);

  m.def("default_config", [](bool inverse) { return experiment_config_json(inverse ? inverse_preset() : ExperimentConfig{}); },
        py::arg("inverse") = false, "Complete experiment JSON with preset values.");
  m.def("validate_config", [](const std::string& text) { return experiment_config_json(parse_experiment_config(text)); },
        py::arg("config_json"), "Strict parse; returns the normalised JSON echo.");

  m.def("train", &run_experiment, py::arg("config_json") = "{}", py::arg("oracle") = "series",
        py::arg("data") = py::none(),
        "Train forward or inverse (per config). Inverse runs without `data` sample sensors from the series.");

  m.def(
      "fit_delta",
      [](double sigma, int hidden_layers, int neurons, int epochs, double lr, std::uint64_t seed) {
        TrainConfig cfg;
        cfg.arch = {hidden_layers, neurons, 1};
        cfg.epochs = epochs;
        cfg.learning_rate = lr;
        cfg.seed = seed;
        DeltaFitResult r = [&] {
          py::gil_scoped_release release;
          return fit_delta_dnn(sigma, cfg);
        }();
        py::dict out;
        out["relative_error_percent"] = r.report.relative_error_final;
        out["final_loss"] = r.report.final.total;
        out["loss_trace"] = r.report.loss_trace;
        out["x"] = r.eval_x;
        out["pred"] = r.eval_pred;
        out["truth"] = r.eval_truth;
        return out;
      },
      py::arg("sigma"), py::arg("hidden_layers") = 4, py::arg("neurons") = 50, py::arg("epochs") = 1000,
      py::arg("lr") = 1e-3, py::arg("seed") = 1);

  m.def(
      "read_field_csv",
      [](const std::string& path) {
        const Field f = read_field_csv(path);
        return py::make_tuple(f.xs, f.ts, grid_array(f));
      },
      py::arg("path"), "Returns (x, t, u) with u shaped (nt, nx).");
  m.def(
      "write_field_csv",
      [](const std::string& path, const std::vector<double>& xs, const std::vector<double>& ts, const Array& u) {
        if (static_cast<std::size_t>(u.size()) != xs.size() * ts.size()) throw UsageError("u must have nt * nx values");
        write_field_csv(path, Field{xs, ts, std::vector<double>(u.data(), u.data() + u.size())});
      },
      py::arg("path"), py::arg("x"), py::arg("t"), py::arg("u"));
}
