#include "beampinn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace beampinn {
namespace {

using nlohmann::json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config: '" + path_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
        out = v.get<double>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
        out = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
        out = v.get<T>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
        out = v.get<std::string>();
      } else {
        if (!v.is_array()) throw ConfigError("");
        out.clear();
        for (const json& e : v) {
          if (!e.is_number()) throw ConfigError("");
          out.push_back(e.get<double>());
        }
      }
    } catch (const ConfigError&) {
      throw ConfigError("config: key '" + path_ + "." + key + "' has the wrong type");
    } catch (const json::exception&) {
      throw ConfigError("config: key '" + path_ + "." + key + "' has the wrong type");
    }
  }

  Section child(const char* key) {
    known_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, path_.empty() ? key : path_ + "." + key);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items())
      if (!known_.count(key))
        throw ConfigError("config: unknown key '" + (path_.empty() ? key : path_ + "." + key) + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Section top(root, "");

  {
    Section s = top.child("beam");
    BeamConfig& b = cfg.beam;
    s.get("m", b.m);
    s.get("c_e", b.c_e);
    s.get("c_i", b.c_i);
    s.get("ei", b.ei);
    s.get("length", b.length);
    s.get("p", b.p);
    s.get("v", b.v);
    s.get("t_end", b.t_end);
    s.reject_unknown();
  }
  {
    Section s = top.child("delta");
    DeltaModel& d = cfg.train.delta;
    std::string kind = to_string(d.kind);
    s.get("kind", kind);
    d.kind = delta_kind_from_string(kind);
    s.get("mu", d.mu);
    s.get("sigma", d.sigma);
    s.get("tol", d.tol);
    s.reject_unknown();
  }
  {
    Section s = top.child("network");
    s.get("hidden_layers", cfg.train.arch.hidden_layers);
    s.get("neurons", cfg.train.arch.neurons);
    s.reject_unknown();
  }
  {
    Section s = top.child("training");
    TrainConfig& t = cfg.train;
    std::string mode = to_string(t.mode);
    s.get("mode", mode);
    t.mode = mode_from_string(mode);
    s.get("epochs", t.epochs);
    s.get("learning_rate", t.learning_rate);
    s.get("lambda_pde", t.lambda.pde);
    s.get("lambda_ic", t.lambda.ic);
    s.get("lambda_bc", t.lambda.bc);
    s.get("seed", t.seed);
    s.get("p_init", t.p_init);
    s.get("augmented_conditions", t.augmented_conditions);
    s.reject_unknown();
  }
  {
    Section s = top.child("sampling");
    s.get("n_int", cfg.train.n_int);
    s.get("n_b", cfg.train.n_b);
    s.get("n_in", cfg.train.n_in);
    s.get("n_data", cfg.train.n_data);
    s.get("sensor_locations", cfg.sensor_locations);
    s.reject_unknown();
  }
  {
    Section s = top.child("oracle");
    s.get("n_terms", cfg.oracle.n_terms);
    s.get("resonance_eps", cfg.oracle.resonance_eps);
    s.get("n_modes", cfg.oracle.reference.n_modes);
    s.get("dt", cfg.oracle.reference.dt);
    s.get("max_substeps", cfg.oracle.reference.max_substeps);
    s.reject_unknown();
  }
  {
    Section s = top.child("output");
    s.get("field_csv", cfg.output.field_csv);
    s.get("report_json", cfg.output.report_json);
    s.get("checkpoint", cfg.output.checkpoint);
    s.reject_unknown();
  }
  top.reject_unknown();

  cfg.beam.validate();
  cfg.train.validate();
  if (cfg.oracle.n_terms < 1) throw ConfigError("config: oracle.n_terms must be >= 1");
  if (!(cfg.oracle.resonance_eps > 0.0)) throw ConfigError("config: oracle.resonance_eps must be > 0");
  if (cfg.sensor_locations.empty()) throw ConfigError("config: sampling.sensor_locations is empty");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string experiment_config_json(const ExperimentConfig& cfg, int indent) {
  const TrainConfig& t = cfg.train;
  json j;
  j["beam"] = {{"m", cfg.beam.m},      {"c_e", cfg.beam.c_e}, {"c_i", cfg.beam.c_i},
               {"ei", cfg.beam.ei},    {"length", cfg.beam.length}, {"p", cfg.beam.p},
               {"v", cfg.beam.v},      {"t_end", cfg.beam.t_end}};
  j["delta"] = {{"kind", to_string(t.delta.kind)},
                {"mu", t.delta.mu},
                {"sigma", t.delta.sigma},
                {"tol", t.delta.tol}};
  j["network"] = {{"hidden_layers", t.arch.hidden_layers}, {"neurons", t.arch.neurons}};
  j["training"] = {{"mode", to_string(t.mode)},
                   {"epochs", t.epochs},
                   {"learning_rate", t.learning_rate},
                   {"lambda_pde", t.lambda.pde},
                   {"lambda_ic", t.lambda.ic},
                   {"lambda_bc", t.lambda.bc},
                   {"seed", t.seed},
                   {"p_init", t.p_init},
                   {"augmented_conditions", t.augmented_conditions}};
  j["sampling"] = {{"n_int", t.n_int},
                   {"n_b", t.n_b},
                   {"n_in", t.n_in},
                   {"n_data", t.n_data},
                   {"sensor_locations", cfg.sensor_locations}};
  j["oracle"] = {{"n_terms", cfg.oracle.n_terms},
                 {"resonance_eps", cfg.oracle.resonance_eps},
                 {"n_modes", cfg.oracle.reference.n_modes},
                 {"dt", cfg.oracle.reference.dt},
                 {"max_substeps", cfg.oracle.reference.max_substeps}};
  j["output"] = {{"field_csv", cfg.output.field_csv},
                 {"report_json", cfg.output.report_json},
                 {"checkpoint", cfg.output.checkpoint}};
  return j.dump(indent);
}

ExperimentConfig inverse_preset() {
  ExperimentConfig cfg;
  cfg.train.mode = Mode::kInverse;
  cfg.train.arch = Architecture{4, 20, 2};
  cfg.train.epochs = 2500;
  cfg.train.lambda = LossWeights{1.0, 1.0, 1.0};
  return cfg;
}

}  // namespace beampinn
