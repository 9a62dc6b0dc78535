#pragma once

// Simply supported Euler-Bernoulli beam under a moving point load:
//   m u_tt + EI u_xxxx = p delta(x - v t),  u = u_xx = 0 at x = 0, L,
//   u = u_t = 0 at t = 0.
// Damping coefficients are carried in the configuration but must be zero.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>

#include "beampinn/network.hpp"

namespace beampinn {

struct BeamConfig {
  double m = 1.0;
  double c_e = 0.0;
  double c_i = 0.0;
  double ei = 1.0;  // flexural rigidity E*I
  double length = std::numbers::pi;
  double p = 1.0;
  double v = 1.0;
  double t_end = std::numbers::pi / 2.0;

  /// Throws ConfigError on non-physical values, nonzero damping, or v*t_end > L.
  void validate() const;
};

enum class DeltaKind { kGaussian, kDiscrete };

struct DeltaModel {
  DeltaKind kind = DeltaKind::kGaussian;
  double mu = 0.0;
  double sigma = 1.0 / std::sqrt(2.0 * std::numbers::pi);  // unit peak height
  double tol = 1e-12;

  static DeltaModel gaussian(double sigma, double mu = 0.0);
  static DeltaModel discrete(double tol = 1e-12);

  void validate() const;
};

std::string to_string(DeltaKind kind);
DeltaKind delta_kind_from_string(const std::string& name);

/// Normal density with mean mu and standard deviation sigma.
double gaussian_delta(double x, double mu, double sigma);

/// Indicator of |arg| < tol.
double discrete_delta(double arg, double tol);

/// delta(x - v t) under the chosen model (the Gaussian is centred at v t + mu).
double load_shape(double x, double t, const BeamConfig& beam, const DeltaModel& delta);

/// m u_tt + EI u_xxxx - p delta(x - v t), with p taken from `beam`.
double pde_residual(const DerivBundle& d, double x, double t, const BeamConfig& beam,
                    const DeltaModel& delta);

struct ModalConstants {
  int n = 1;
  double driving = 0.0;  // Omega_n = n v pi / L
  double natural = 0.0;  // omega_n = (n pi / L)^2 sqrt(EI / m)
  double speed_ratio = 0.0;  // S_n = Omega_n / omega_n
};

ModalConstants modal_constants(int n, const BeamConfig& beam);

inline constexpr double kDefaultResonanceEps = 1e-8;
inline constexpr int kDefaultSeriesTerms = 200;

/// Time factor of mode n: (sin(S w t) - S sin(w t)) / (1 - S^2).
double modal_bracket(double natural, double speed_ratio, double t);

/// S -> 1 limit of modal_bracket: (sin(w t) - w t cos(w t)) / 2.
double resonant_bracket(double natural, double t);

/// Truncated closed-form modal series for the undamped Dirac-loaded beam.
/// Modes with |1 - S_n^2| < resonance_eps use the resonant limit.
double analytical_deflection(double x, double t, const BeamConfig& beam,
                             int n_terms = kDefaultSeriesTerms,
                             double resonance_eps = kDefaultResonanceEps);

/// 100 * ||pred - truth||_2 / ||truth||_2.
double relative_error_percent(std::span<const double> pred, std::span<const double> truth);

/// Deflection field u(x, t).
using FieldFn = std::function<double(double, double)>;

}  // namespace beampinn
