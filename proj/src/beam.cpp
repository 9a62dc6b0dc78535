#include "beampinn/beam.hpp"

#include <cmath>
#include <numbers>

namespace beampinn {

void BeamConfig::validate() const {
  if (!(m > 0.0)) throw ConfigError("mass per unit length m must be > 0");
  if (!(ei > 0.0)) throw ConfigError("flexural rigidity EI must be > 0");
  if (!(length > 0.0)) throw ConfigError("beam length L must be > 0");
  if (!(v >= 0.0)) throw ConfigError("load speed v must be >= 0");
  if (!(t_end > 0.0)) throw ConfigError("final time t_end must be > 0");
  if (c_e != 0.0 || c_i != 0.0)
    throw ConfigError("nonzero damping (c_e, c_i) is not supported");
  if (v * t_end > length * (1.0 + 1e-12))
    throw ConfigError("load leaves the beam before t_end (v * t_end > L)");
}

DeltaModel DeltaModel::gaussian(double sigma, double mu) {
  DeltaModel d;
  d.kind = DeltaKind::kGaussian;
  d.sigma = sigma;
  d.mu = mu;
  d.validate();
  return d;
}

DeltaModel DeltaModel::discrete(double tol) {
  DeltaModel d;
  d.kind = DeltaKind::kDiscrete;
  d.tol = tol;
  d.validate();
  return d;
}

void DeltaModel::validate() const {
  if (kind == DeltaKind::kGaussian && !(sigma > 0.0))
    throw ConfigError("gaussian delta needs sigma > 0");
  if (kind == DeltaKind::kDiscrete && !(tol > 0.0))
    throw ConfigError("discrete delta needs tol > 0");
}

std::string to_string(DeltaKind kind) {
  return kind == DeltaKind::kGaussian ? "gaussian" : "discrete";
}

DeltaKind delta_kind_from_string(const std::string& name) {
  if (name == "gaussian") return DeltaKind::kGaussian;
  if (name == "discrete") return DeltaKind::kDiscrete;
  throw ConfigError("unknown delta kind '" + name + "' (expected gaussian or discrete)");
}

double gaussian_delta(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double discrete_delta(double arg, double tol) { return std::abs(arg) < tol ? 1.0 : 0.0; }

double load_shape(double x, double t, const BeamConfig& beam, const DeltaModel& delta) {
  const double arg = x - beam.v * t;
  if (delta.kind == DeltaKind::kGaussian) return gaussian_delta(arg, delta.mu, delta.sigma);
  return discrete_delta(arg, delta.tol);
}

double pde_residual(const DerivBundle& d, double x, double t, const BeamConfig& beam,
                    const DeltaModel& delta) {
  if (beam.c_e != 0.0 || beam.c_i != 0.0)
    throw ConfigError("nonzero damping (c_e, c_i) is not supported");
  return beam.m * d.u_tt + beam.ei * d.u_xxxx - beam.p * load_shape(x, t, beam, delta);
}

ModalConstants modal_constants(int n, const BeamConfig& beam) {
  if (n < 1) throw UsageError("mode index must be >= 1");
  const double k = n * std::numbers::pi / beam.length;
  ModalConstants c;
  c.n = n;
  c.driving = k * beam.v;
  c.natural = k * k * std::sqrt(beam.ei / beam.m);
  c.speed_ratio = c.driving / c.natural;
  return c;
}

double modal_bracket(double natural, double speed_ratio, double t) {
  const double s = speed_ratio;
  return (std::sin(s * natural * t) - s * std::sin(natural * t)) / (1.0 - s * s);
}

double resonant_bracket(double natural, double t) {
  const double wt = natural * t;
  return 0.5 * (std::sin(wt) - wt * std::cos(wt));
}

double analytical_deflection(double x, double t, const BeamConfig& beam, int n_terms,
                             double resonance_eps) {
  if (n_terms < 1) throw UsageError("n_terms must be >= 1");
  const double pi = std::numbers::pi;
  const double amplitude = 2.0 * beam.p * std::pow(beam.length, 3) / (beam.ei * std::pow(pi, 4));
  double sum = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    const ModalConstants c = modal_constants(n, beam);
    const double s = c.speed_ratio;
    const double bracket = std::abs(1.0 - s * s) < resonance_eps
                               ? resonant_bracket(c.natural, t)
                               : (std::sin(c.driving * t) - s * std::sin(c.natural * t)) / (1.0 - s * s);
    const double n4 = static_cast<double>(n) * n * n * n;
    sum += std::sin(n * pi * x / beam.length) * bracket / n4;
  }
  return amplitude * sum;
}

double relative_error_percent(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size())
    throw UsageError("relative error: length mismatch (" + std::to_string(pred.size()) + " vs " +
                     std::to_string(truth.size()) + ")");
  if (truth.empty()) throw UsageError("relative error: empty input");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    num += d * d;
    den += truth[i] * truth[i];
  }
  if (den == 0.0) throw MetricError("relative error undefined: reference is identically zero");
  return 100.0 * std::sqrt(num) / std::sqrt(den);
}

}  // namespace beampinn
