#include "beampinn/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "beampinn/sampling.hpp"

namespace beampinn {

std::vector<double> Field::final_slice() const { return slice(nt() - 1); }

std::vector<double> Field::slice(std::size_t it) const {
  if (it >= nt()) throw UsageError("time level out of range");
  const auto begin = u.begin() + static_cast<std::ptrdiff_t>(it * nx());
  return {begin, begin + static_cast<std::ptrdiff_t>(nx())};
}

namespace {

// Cell index and fraction of v along sorted axis g.
std::pair<std::size_t, double> locate(const std::vector<double>& g, double v) {
  if (g.size() < 2 || v < g.front() || v > g.back()) throw IoError("point outside the field grid");
  std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), v) - g.begin());
  i = std::clamp<std::size_t>(i, 1, g.size() - 1) - 1;
  return {i, (v - g[i]) / (g[i + 1] - g[i])};
}

}  // namespace

double Field::interpolate(double x, double t) const {
  const auto [ix, fx] = locate(xs, x);
  const auto [it, ft] = locate(ts, t);
  const double lo = (1 - fx) * at(ix, it) + fx * at(ix + 1, it);
  const double hi = (1 - fx) * at(ix, it + 1) + fx * at(ix + 1, it + 1);
  return (1 - ft) * lo + ft * hi;
}

Field sample_field(const BeamConfig& beam, const FieldFn& fn, int nx, int nt) {
  if (nx < 2 || nt < 2) throw UsageError("evaluation grid needs at least 2 x 2 points");
  Field f;
  for (int i = 0; i < nx; ++i) f.xs.push_back(beam.length * i / (nx - 1));
  for (int j = 0; j < nt; ++j) f.ts.push_back(beam.t_end * j / (nt - 1));
  f.u.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt));
  for (double t : f.ts)
    for (double x : f.xs) f.u.push_back(fn(x, t));
  return f;
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

std::string format_field_csv(const Field& field) {
  if (field.u.size() != field.nx() * field.nt()) throw UsageError("field is not rectangular");
  std::string out = "x,t,u\n";
  for (std::size_t it = 0; it < field.nt(); ++it) {
    for (std::size_t ix = 0; ix < field.nx(); ++ix) {
      out += format_real(field.xs[ix]);
      out += ',';
      out += format_real(field.ts[it]);
      out += ',';
      out += format_real(field.at(ix, it));
      out += '\n';
    }
  }
  return out;
}

void write_field_csv(const std::string& path, const Field& field) {
  const std::string text = format_field_csv(field);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << text;
  if (!os) throw IoError("failed writing: " + path);
}

namespace {

double parse_real(std::string_view s, const std::string& path, std::size_t line) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError(path + ":" + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<DataPoint> read_xtu_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,t,u") throw IoError(path + ": expected header 'x,t,u', got '" + line + "'");
  std::vector<DataPoint> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::string_view sv(line);
    const auto c1 = sv.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : sv.find(',', c1 + 1);
    if (c2 == std::string_view::npos || sv.find(',', c2 + 1) != std::string_view::npos)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 3 columns");
    rows.push_back({parse_real(sv.substr(0, c1), path, lineno),
                    parse_real(sv.substr(c1 + 1, c2 - c1 - 1), path, lineno),
                    parse_real(sv.substr(c2 + 1), path, lineno)});
  }
  return rows;
}

Field read_field_csv(const std::string& path) {
  const std::vector<DataPoint> rows = read_xtu_csv(path);
  if (rows.empty()) throw IoError(path + ": no data rows");
  Field f;
  const double t0 = rows.front().t;
  for (const DataPoint& r : rows) {
    if (r.t != t0) break;
    f.xs.push_back(r.x);
  }
  const std::size_t nx = f.xs.size();
  if (rows.size() % nx != 0) throw IoError(path + ": row count is not a multiple of the x count");
  const std::size_t nt = rows.size() / nx;
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = rows[it * nx].t;
    f.ts.push_back(t);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const DataPoint& r = rows[it * nx + ix];
      if (r.t != t || r.x != f.xs[ix]) throw IoError(path + ": rows do not form a rectangular t-major grid");
      f.u.push_back(r.u);
    }
  }
  return f;
}

}  // namespace beampinn
