#include "beampinn/reference_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace beampinn {
namespace {

// Simpson nodes/weights over the load's support window at time t, with the
// load density already folded into the weights. Returns false when the
// window misses the beam entirely.
bool load_samples(double t, const BeamConfig& beam, const DeltaModel& delta,
                  std::array<double, kModalQuadraturePanels + 1>& theta,
                  std::array<double, kModalQuadraturePanels + 1>& weight) {
  const double centre = beam.v * t + delta.mu;
  const double a = std::max(0.0, centre - kModalWindowSigmas * delta.sigma);
  const double b = std::min(beam.length, centre + kModalWindowSigmas * delta.sigma);
  if (!(b > a)) return false;
  const int panels = kModalQuadraturePanels;
  const double h = (b - a) / panels;
  const double scale = 2.0 * beam.p / (beam.m * beam.length) * h / 3.0;
  for (int i = 0; i <= panels; ++i) {
    const double x = a + i * h;
    const double simpson = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    theta[static_cast<std::size_t>(i)] = std::numbers::pi * x / beam.length;
    weight[static_cast<std::size_t>(i)] = scale * simpson * gaussian_delta(x - beam.v * t, delta.mu, delta.sigma);
  }
  return true;
}

void require_gaussian(const DeltaModel& delta) {
  if (delta.kind != DeltaKind::kGaussian)
    throw ConfigError("reference solver supports only the gaussian load model");
  delta.validate();
}

}  // namespace

double modal_force(int n, double t, const BeamConfig& beam, const DeltaModel& delta) {
  if (n < 1) throw UsageError("mode index must be >= 1");
  require_gaussian(delta);
  std::array<double, kModalQuadraturePanels + 1> theta{};
  std::array<double, kModalQuadraturePanels + 1> weight{};
  if (!load_samples(t, beam, delta, theta, weight)) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) sum += weight[i] * std::sin(n * theta[i]);
  return sum;
}

void modal_forces(double t, const BeamConfig& beam, const DeltaModel& delta,
                  std::span<double> forces) {
  std::fill(forces.begin(), forces.end(), 0.0);
  std::array<double, kModalQuadraturePanels + 1> theta{};
  std::array<double, kModalQuadraturePanels + 1> weight{};
  if (!load_samples(t, beam, delta, theta, weight)) return;
  // sin(n theta) by the Chebyshev recurrence s_{n+1} = 2 cos(theta) s_n - s_{n-1}.
  constexpr std::size_t kNodes = kModalQuadraturePanels + 1;
  std::array<double, kNodes> two_cos{};
  std::array<double, kNodes> prev{};
  std::array<double, kNodes> cur{};
  for (std::size_t i = 0; i < kNodes; ++i) {
    two_cos[i] = 2.0 * std::cos(theta[i]);
    prev[i] = 0.0;
    cur[i] = std::sin(theta[i]);
  }
  for (std::size_t n = 0; n < forces.size(); ++n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kNodes; ++i) sum += weight[i] * cur[i];
    forces[n] = sum;
    for (std::size_t i = 0; i < kNodes; ++i) {
      const double next = two_cos[i] * cur[i] - prev[i];
      prev[i] = cur[i];
      cur[i] = next;
    }
  }
}

ModalSolution::ModalSolution(BeamConfig beam, int n_modes, double dt, std::size_t n_steps)
    : beam_(beam),
      n_modes_(n_modes),
      dt_(dt),
      n_steps_(n_steps),
      q_(static_cast<std::size_t>(n_modes) * (n_steps + 1), 0.0),
      qd_(static_cast<std::size_t>(n_modes) * (n_steps + 1), 0.0) {}

double ModalSolution::deflection(double x, double t) const {
  const double span = static_cast<double>(n_steps_) * dt_;
  const double tc = std::clamp(t, 0.0, span);
  auto k = static_cast<std::size_t>(std::floor(tc / dt_));
  if (k >= n_steps_) k = n_steps_ - 1;
  const double s = (tc - time(k)) / dt_;
  // Cubic Hermite basis on [t_k, t_k+1].
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  const double theta = std::numbers::pi * x / beam_.length;
  double u = 0.0;
  for (int n = 1; n <= n_modes_; ++n) {
    const double qn = h00 * q(n, k) + h10 * dt_ * q_rate(n, k) + h01 * q(n, k + 1) +
                      h11 * dt_ * q_rate(n, k + 1);
    u += qn * std::sin(n * theta);
  }
  return u;
}

ModalSolution solve_reference(const BeamConfig& beam, const DeltaModel& delta,
                              const ReferenceOptions& options) {
  beam.validate();
  require_gaussian(delta);
  if (options.n_modes < 1) throw ConfigError("reference solver needs n_modes >= 1");
  if (!(options.dt > 0.0)) throw ConfigError("reference solver needs dt > 0");

  const auto n_steps = static_cast<std::size_t>(std::ceil(beam.t_end / options.dt - 1e-9));
  const double dt = beam.t_end / static_cast<double>(n_steps);
  const double omega_max = modal_constants(options.n_modes, beam).natural;
  const int substeps = std::max(1, static_cast<int>(std::ceil(dt * omega_max / 0.5 - 1e-12)));
  if (substeps > options.max_substeps)
    throw ConfigError("reference solver step too large: dt * omega_max = " +
                      std::to_string(dt * omega_max) + " needs " + std::to_string(substeps) +
                      " RK4 substeps (limit " + std::to_string(options.max_substeps) + ")");
  const double h = dt / substeps;

  const auto modes = static_cast<std::size_t>(options.n_modes);
  std::vector<double> omega2(modes);
  for (std::size_t n = 0; n < modes; ++n) {
    const double w = modal_constants(static_cast<int>(n) + 1, beam).natural;
    omega2[n] = w * w;
  }

  ModalSolution sol(beam, options.n_modes, dt, n_steps);
  std::vector<double> q(modes, 0.0), qd(modes, 0.0);
  std::vector<double> f0(modes), fh(modes), f1(modes);
  std::vector<double> k1q(modes), k1v(modes), k2q(modes), k2v(modes), k3q(modes), k3v(modes);
  std::vector<double> tq(modes), tv(modes);

  modal_forces(0.0, beam, delta, f0);
  for (std::size_t step = 0; step < n_steps; ++step) {
    for (int sub = 0; sub < substeps; ++sub) {
      const double t = static_cast<double>(step) * dt + sub * h;
      modal_forces(t + 0.5 * h, beam, delta, fh);
      modal_forces(t + h, beam, delta, f1);
      for (std::size_t n = 0; n < modes; ++n) {
        k1q[n] = qd[n];
        k1v[n] = f0[n] - omega2[n] * q[n];
        tq[n] = q[n] + 0.5 * h * k1q[n];
        tv[n] = qd[n] + 0.5 * h * k1v[n];
        k2q[n] = tv[n];
        k2v[n] = fh[n] - omega2[n] * tq[n];
        tq[n] = q[n] + 0.5 * h * k2q[n];
        tv[n] = qd[n] + 0.5 * h * k2v[n];
        k3q[n] = tv[n];
        k3v[n] = fh[n] - omega2[n] * tq[n];
        tq[n] = q[n] + h * k3q[n];
        tv[n] = qd[n] + h * k3v[n];
        const double k4q = tv[n];
        const double k4v = f1[n] - omega2[n] * tq[n];
        q[n] += h / 6.0 * (k1q[n] + 2.0 * k2q[n] + 2.0 * k3q[n] + k4q);
        qd[n] += h / 6.0 * (k1v[n] + 2.0 * k2v[n] + 2.0 * k3v[n] + k4v);
      }
      std::swap(f0, f1);
    }
    for (std::size_t n = 0; n < modes; ++n) {
      sol.q_[sol.index(static_cast<int>(n) + 1, step + 1)] = q[n];
      sol.qd_[sol.index(static_cast<int>(n) + 1, step + 1)] = qd[n];
    }
  }
  return sol;
}

}  // namespace beampinn
