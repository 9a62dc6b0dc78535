#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beampinn/beam.hpp"

namespace beampinn {

struct Point {
  double x = 0.0;
  double t = 0.0;
};

struct DataPoint {
  double x = 0.0;
  double t = 0.0;
  double u = 0.0;
};

/// Collocation sets for one training run.
struct SampleSet {
  std::vector<Point> interior;
  std::vector<Point> boundary;  // x is exactly 0 or L
  std::vector<Point> initial;   // t is exactly 0
  std::vector<DataPoint> data;  // sensor observations (inverse mode)
};

/// Uniform interior points, boundary points split evenly between x = 0 and
/// x = L, initial points at t = 0. Each category draws from its own stream.
SampleSet sample_training_points(const BeamConfig& beam, int n_int, int n_b, int n_in,
                                 std::uint64_t seed);

/// Points per sensor line: n_total / count each, remainder to the first line.
std::vector<int> sensor_split(std::size_t locations, int n_total);

/// Uniform random times on each sensor line with targets from `truth`.
std::vector<DataPoint> sample_sensor_data(std::span<const double> locations, int n_total,
                                          const BeamConfig& beam, const FieldFn& truth,
                                          std::uint64_t seed);

/// Sensor readings from a CSV with header x,t,u.
std::vector<DataPoint> read_sensor_csv(const std::string& path, const BeamConfig& beam);

}  // namespace beampinn
