#include "beampinn/sampling.hpp"

#include <cmath>

#include "beampinn/field_io.hpp"
#include "beampinn/rng.hpp"

namespace beampinn {

SampleSet sample_training_points(const BeamConfig& beam, int n_int, int n_b, int n_in,
                                 std::uint64_t seed) {
  if (n_int < 0 || n_b < 0 || n_in < 0) throw UsageError("sample counts must be >= 0");
  if (n_b % 2 != 0) throw UsageError("boundary point count must be even (split across x = 0 and x = L)");
  SampleSet set;

  CounterRng interior(seed, streams::kInterior);
  set.interior.reserve(static_cast<std::size_t>(n_int));
  for (int i = 0; i < n_int; ++i) {
    const double x = interior.uniform(0.0, beam.length);
    const double t = interior.uniform(0.0, beam.t_end);
    set.interior.push_back({x, t});
  }

  CounterRng boundary(seed, streams::kBoundary);
  set.boundary.reserve(static_cast<std::size_t>(n_b));
  for (int i = 0; i < n_b; ++i)
    set.boundary.push_back({i < n_b / 2 ? 0.0 : beam.length, boundary.uniform(0.0, beam.t_end)});

  CounterRng initial(seed, streams::kInitial);
  set.initial.reserve(static_cast<std::size_t>(n_in));
  for (int i = 0; i < n_in; ++i) set.initial.push_back({initial.uniform(0.0, beam.length), 0.0});
  return set;
}

std::vector<int> sensor_split(std::size_t locations, int n_total) {
  if (locations == 0) throw UsageError("at least one sensor location is required");
  if (n_total < 0) throw UsageError("sensor point count must be >= 0");
  const int per = n_total / static_cast<int>(locations);
  std::vector<int> counts(locations, per);
  counts[0] += n_total - per * static_cast<int>(locations);
  return counts;
}

std::vector<DataPoint> sample_sensor_data(std::span<const double> locations, int n_total,
                                          const BeamConfig& beam, const FieldFn& truth,
                                          std::uint64_t seed) {
  for (double x : locations)
    if (!(x >= 0.0 && x <= beam.length))
      throw UsageError("sensor location " + std::to_string(x) + " outside [0, L]");
  const std::vector<int> counts = sensor_split(locations.size(), n_total);
  CounterRng rng(seed, streams::kSensor);
  std::vector<DataPoint> data;
  data.reserve(static_cast<std::size_t>(n_total));
  for (std::size_t s = 0; s < locations.size(); ++s) {
    for (int i = 0; i < counts[s]; ++i) {
      const double t = rng.uniform(0.0, beam.t_end);
      const double u = truth(locations[s], t);
      if (!std::isfinite(u)) throw UsageError("sensor truth returned a non-finite value");
      data.push_back({locations[s], t, u});
    }
  }
  return data;
}

std::vector<DataPoint> read_sensor_csv(const std::string& path, const BeamConfig& beam) {
  const std::vector<DataPoint> rows = read_xtu_csv(path);
  for (const DataPoint& r : rows) {
    if (!(r.x >= 0.0 && r.x <= beam.length) || !(r.t >= 0.0 && r.t <= beam.t_end))
      throw IoError("sensor row outside the space-time domain in " + path);
    if (!std::isfinite(r.u)) throw IoError("non-finite sensor value in " + path);
  }
  return rows;
}

}  // namespace beampinn
