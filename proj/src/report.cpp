#include "beampinn/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace beampinn {
namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json losses(const LossBreakdown& l) {
  return {{"total", l.total}, {"l_pde", l.l_pde}, {"l_ic", l.l_ic}, {"l_bc", l.l_bc}, {"l_data", l.l_data}};
}

}  // namespace

std::string report_json(const RunReport& report, const ExperimentConfig& echo, int indent) {
  json j;
  j["experiment"] = report.experiment;
  j["final_loss"] = report.final.total;
  j["l_pde"] = report.final.l_pde;
  j["l_ic"] = report.final.l_ic;
  j["l_bc"] = report.final.l_bc;
  j["l_data"] = report.final.l_data;
  j["relative_error_percent"] = report.relative_error_final;
  j["relative_error_percent_grid"] = report.relative_error_grid;
  json per_time = json::array();
  for (double r : report.relative_error_per_time) per_time.push_back(finite_or_null(r));
  j["relative_error_percent_per_time"] = per_time;
  j["predicted_p"] = report.predicted_p ? json(*report.predicted_p) : json(nullptr);
  j["seed"] = report.seed;
  j["config"] = json::parse(experiment_config_json(echo, -1));
  j["initial_losses"] = losses(report.initial);
  j["mean_losses"] = {{"pde", report.final.mean_pde},
                      {"ic", report.final.mean_ic},
                      {"bc", report.final.mean_bc},
                      {"data", report.final.mean_data}};
  j["loss_trace"] = report.loss_trace;
  j["oracle"] = report.oracle;
  j["data_source"] = report.data_source;
  j["sampling"] = {{"n_int", report.config.n_int},
                   {"n_b", report.config.n_b},
                   {"n_in", report.config.n_in},
                   {"resampled_per_epoch", false}};
  j["wall_seconds"] = report.wall_seconds;
  j["field_csv"] = echo.output.field_csv;
  j["checkpoint"] = echo.output.checkpoint;
  return j.dump(indent);
}

void write_report(const std::string& path, const RunReport& report, const ExperimentConfig& echo) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << report_json(report, echo) << '\n';
  if (!os) throw IoError("failed writing: " + path);
}

SavedReport read_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open report: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw IoError("report is not valid JSON: " + path);
  }
  if (!j.contains("config") || !j.contains("field_csv")) throw IoError("report lacks config/field_csv: " + path);
  SavedReport out;
  out.config = parse_experiment_config(j.at("config").dump());
  out.field_csv = j.at("field_csv").get<std::string>();
  out.checkpoint = j.value("checkpoint", std::string());
  out.experiment = j.value("experiment", std::string());
  return out;
}

}  // namespace beampinn
