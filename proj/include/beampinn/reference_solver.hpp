#pragma once

// Modal-superposition oracle for the Gaussian-loaded beam. Independent of the
// closed-form series: the load is projected onto sin(n pi x / L) by quadrature
// and every generalized coordinate is integrated from rest with RK4.

#include <vector>

#include "beampinn/beam.hpp"

namespace beampinn {

struct ReferenceOptions {
  int n_modes = 200;
  double dt = 1e-4;  // output sampling step (rounded down so t_end is hit exactly)
  // RK4 substeps per output step are chosen so that h * omega_max <= 0.5; if
  // that would need more than this many substeps the request is rejected.
  int max_substeps = 64;
};

inline constexpr int kModalQuadraturePanels = 256;
inline constexpr double kModalWindowSigmas = 8.0;

/// (2p / (m L)) * integral_0^L g(x - v t - mu) sin(n pi x / L) dx by
/// 256-panel composite Simpson over the load's +-8 sigma window clipped to [0, L].
double modal_force(int n, double t, const BeamConfig& beam, const DeltaModel& delta);

/// modal_force for n = 1..forces.size() at once (shared load samples).
void modal_forces(double t, const BeamConfig& beam, const DeltaModel& delta,
                  std::span<double> forces);

class ModalSolution {
 public:
  ModalSolution(BeamConfig beam, int n_modes, double dt, std::size_t n_steps);

  int n_modes() const noexcept { return n_modes_; }
  double dt() const noexcept { return dt_; }
  std::size_t n_samples() const noexcept { return n_steps_ + 1; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt_; }

  /// Generalized coordinate q_n and its rate at output sample k (n is 1-based).
  double q(int n, std::size_t k) const { return q_[index(n, k)]; }
  double q_rate(int n, std::size_t k) const { return qd_[index(n, k)]; }

  /// u(x, t) = sum_n q_n(t) sin(n pi x / L); q is cubic-Hermite interpolated between samples.
  double deflection(double x, double t) const;

  const BeamConfig& beam() const noexcept { return beam_; }

 private:
  friend ModalSolution solve_reference(const BeamConfig&, const DeltaModel&, const ReferenceOptions&);
  std::size_t index(int n, std::size_t k) const {
    return static_cast<std::size_t>(n - 1) * (n_steps_ + 1) + k;
  }

  BeamConfig beam_;
  int n_modes_;
  double dt_;
  std::size_t n_steps_;
  std::vector<double> q_;   // mode-major
  std::vector<double> qd_;
};

/// Integrates q_n'' + omega_n^2 q_n = modal_force(n, t) from rest.
/// Throws ConfigError for a non-Gaussian load, n_modes < 1, dt <= 0, or a
/// step that would need more than max_substeps RK4 substeps to stay stable.
ModalSolution solve_reference(const BeamConfig& beam, const DeltaModel& delta,
                              const ReferenceOptions& options = {});

}  // namespace beampinn
