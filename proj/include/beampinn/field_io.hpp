#pragma once

#include <span>
#include <string>
#include <vector>

#include "beampinn/beam.hpp"

namespace beampinn {

struct DataPoint;

/// Deflection sampled on a rectangular space-time grid; u is stored t-major
/// (index it * nx + ix), matching the CSV row order.
struct Field {
  std::vector<double> xs;
  std::vector<double> ts;
  std::vector<double> u;

  std::size_t nx() const noexcept { return xs.size(); }
  std::size_t nt() const noexcept { return ts.size(); }
  double at(std::size_t ix, std::size_t it) const { return u[it * xs.size() + ix]; }

  /// Values at the last time level.
  std::vector<double> final_slice() const;
  /// Values at time level it.
  std::vector<double> slice(std::size_t it) const;
  /// Bilinear interpolation inside the grid; IoError outside it.
  double interpolate(double x, double t) const;
};

inline constexpr int kEvalGridNx = 101;
inline constexpr int kEvalGridNt = 51;

/// Uniform nx x nt grid over [0, L] x [0, t_end] filled from `fn`.
Field sample_field(const BeamConfig& beam, const FieldFn& fn, int nx = kEvalGridNx,
                   int nt = kEvalGridNt);

/// Header "x,t,u", rows t-major then x, 17 significant digits, LF endings.
void write_field_csv(const std::string& path, const Field& field);
std::string format_field_csv(const Field& field);

/// Parses a file written by write_field_csv; throws IoError if it is not a rectangular grid.
Field read_field_csv(const std::string& path);

/// Parses any x,t,u CSV (header required) into rows.
std::vector<DataPoint> read_xtu_csv(const std::string& path);

/// 17-significant-digit decimal that round-trips exactly.
std::string format_real(double v);

}  // namespace beampinn
