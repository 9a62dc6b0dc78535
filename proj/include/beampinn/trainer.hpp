#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beampinn/beam.hpp"
#include "beampinn/field_io.hpp"
#include "beampinn/network.hpp"
#include "beampinn/sampling.hpp"
#include "beampinn/tape.hpp"

namespace beampinn {

enum class Mode { kForward, kInverse };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct LossWeights {
  double pde = 10.0;  // lambda1
  double ic = 1.0;    // lambda2
  double bc = 10.0;   // lambda3
};

struct TrainConfig {
  Architecture arch{1, 20, 2};
  int epochs = 5000;
  double learning_rate = 1e-2;
  LossWeights lambda;
  Mode mode = Mode::kForward;
  DeltaModel delta;
  std::uint64_t seed = 1;
  int n_int = 1200;
  int n_b = 200;
  int n_in = 200;
  int n_data = 5000;
  double p_init = 0.1;
  // Include the bending-moment (u_xx) boundary term and the velocity (u_t)
  // initial term alongside the displacement terms.
  bool augmented_conditions = true;

  void validate() const;
};

/// Unnormalized sums of squared residuals per loss family.
struct LossBreakdown {
  double l_pde = 0.0;
  double l_ic = 0.0;
  double l_bc = 0.0;
  double l_data = 0.0;
  double total = 0.0;

  // Per-point means, for diagnostics only.
  double mean_pde = 0.0;
  double mean_ic = 0.0;
  double mean_bc = 0.0;
  double mean_data = 0.0;
};

/// Load magnitude used in the residual: the trainable scalar when present,
/// otherwise beam.p.
double effective_load(const MlpParams& params, const BeamConfig& beam);

/// Loss terms at the current parameters (batched jet path).
LossBreakdown assemble_loss(const MlpParams& params, const SampleSet& samples,
                            const BeamConfig& beam, const TrainConfig& cfg);

/// Loss terms plus d(total)/d(params) written into `grad` (size params.size()).
LossBreakdown loss_and_gradient(const MlpParams& params, const SampleSet& samples,
                                const BeamConfig& beam, const TrainConfig& cfg,
                                std::span<double> grad);

/// The same total loss recorded on a tape from Jet<Var> network evaluations.
/// `theta` has params.size() entries (the load last when `has_load`).
Var tape_total_loss(const Architecture& arch, std::span<const Var> theta, bool has_load,
                    const SampleSet& samples, const BeamConfig& beam, const TrainConfig& cfg);

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               double lr, const AdamOptions& options = {});

struct RunReport {
  LossBreakdown initial;
  LossBreakdown final;
  double relative_error_final = 0.0;  // percent, last time level
  double relative_error_grid = 0.0;   // percent, full evaluation grid
  std::vector<double> relative_error_per_time;  // percent per time level (NaN where undefined)
  std::optional<double> predicted_p;
  std::vector<double> loss_trace;  // total loss before each update, then the final value
  std::uint64_t seed = 0;
  std::string experiment;  // "forward", "inverse", "delta-fit"
  std::string oracle;      // description of the reference field
  std::string data_source; // provenance of inverse-mode sensor data
  TrainConfig config;
  BeamConfig beam;
  double wall_seconds = 0.0;
};

struct TrainResult {
  RunReport report;
  MlpParams params;
  Field field;  // network prediction on the evaluation grid
};

/// Full-batch Adam training. Forward mode keeps p = beam.p; inverse mode adds
/// a trainable load initialised at cfg.p_init and needs non-empty `data`.
/// Throws TrainingError (with the epoch) when the loss stops being finite.
TrainResult train(const BeamConfig& beam, const TrainConfig& cfg, const FieldFn& oracle,
                  std::vector<DataPoint> data = {}, std::string oracle_name = "series");

/// Grid used by fit_delta_dnn.
inline constexpr int kDeltaFitGrid = 2000;
inline constexpr double kDeltaFitHalfWidth = 0.5;

struct DeltaFitResult {
  RunReport report;
  MlpParams params;
  std::vector<double> eval_x;
  std::vector<double> eval_pred;
  std::vector<double> eval_truth;
};

/// Supervised fit of the unit-mass Gaussian of width sigma on a uniform grid
/// of kDeltaFitGrid points over [-0.5, 0.5]; R is measured on the midpoints.
/// report.relative_error_grid holds R on the training grid itself.
/// `initial` overrides the seeded initialisation (architecture must have 1 input).
DeltaFitResult fit_delta_dnn(double sigma, const TrainConfig& cfg,
                             std::optional<MlpParams> initial = std::nullopt);

}  // namespace beampinn
