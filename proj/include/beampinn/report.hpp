#pragma once

#include <string>

#include "beampinn/config.hpp"
#include "beampinn/trainer.hpp"

namespace beampinn {

/// Report as JSON with stable keys: final_loss, l_pde, l_ic, l_bc, l_data,
/// relative_error_percent, predicted_p, seed, config (plus diagnostics).
std::string report_json(const RunReport& report, const ExperimentConfig& echo, int indent = 2);

void write_report(const std::string& path, const RunReport& report, const ExperimentConfig& echo);

/// Fields of a saved report needed downstream (inverse-from-forward).
struct SavedReport {
  ExperimentConfig config;
  std::string field_csv;
  std::string checkpoint;
  std::string experiment;
};

SavedReport read_report(const std::string& path);

}  // namespace beampinn
