#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "beampinn/beam.hpp"
#include "beampinn/reference_solver.hpp"
#include "beampinn/trainer.hpp"

namespace beampinn {

struct OracleSettings {
  int n_terms = kDefaultSeriesTerms;
  double resonance_eps = kDefaultResonanceEps;
  ReferenceOptions reference;
};

struct OutputPaths {
  std::string field_csv = "field.csv";
  std::string report_json = "report.json";
  std::string checkpoint;  // empty: no checkpoint
};

/// Everything one CLI run needs. Omitted fields keep the forward preset
/// (1 x 20 tanh, 5000 epochs, 1200/200/200 points, lambda = 10/1/10,
/// unit-peak Gaussian load, m = EI = v = p = 1, L = pi, t_end = pi/2).
struct ExperimentConfig {
  BeamConfig beam;
  TrainConfig train;
  OracleSettings oracle;
  std::vector<double> sensor_locations{std::numbers::pi / 8, std::numbers::pi / 4, std::numbers::pi / 2};
  OutputPaths output;
};

/// Strict parse: unknown keys or wrongly typed values raise ConfigError naming the key.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Complete JSON echo; parse_experiment_config(experiment_config_json(c)) == c.
std::string experiment_config_json(const ExperimentConfig& cfg, int indent = 2);

/// Preset for the inverse experiment: 4 x 20, all weights 1, 2500 epochs.
ExperimentConfig inverse_preset();

}  // namespace beampinn
