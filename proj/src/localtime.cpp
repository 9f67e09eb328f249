#include "levylt/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levylt/report_io.hpp"

namespace levylt {

namespace {

constexpr double kMaxBins = 5e8;

}  // namespace

std::size_t GridSpec::n_bins() const {
  if (!(eps > 0.0) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("GridSpec: eps must be positive and bounds finite");
  const double width = (x_max - x_min) / eps;
  const double rounded = std::round(width);
  if (!(rounded >= 1.0)) throw std::invalid_argument("GridSpec: range narrower than one bin");
  if (std::abs(width - rounded) > 1e-6) throw std::invalid_argument("GridSpec: range is not a whole number of bins");
  if (rounded > kMaxBins) throw std::invalid_argument("GridSpec: too many bins");
  return static_cast<std::size_t>(rounded);
}

GridSpec default_grid(const SamplePath& path, double eps, double offset) {
  if (path.positions.empty()) throw std::invalid_argument("default_grid: empty path");
  if (!(eps > 0.0)) throw std::invalid_argument("default_grid: eps must be positive");
  if (!(offset >= 0.0 && offset < 1.0)) throw std::invalid_argument("default_grid: offset must lie in [0, 1)");
  const auto [lo, hi] = std::minmax_element(path.positions.begin(), path.positions.end());
  const double shift = offset * eps;
  const double first = std::floor((*lo - shift) / eps) - 2.0;
  const double last = std::floor((*hi - shift) / eps) + 3.0;
  GridSpec grid;
  grid.eps = eps;
  grid.x_min = first * eps + shift;
  grid.x_max = grid.x_min + (last - first) * eps;
  return grid;
}

LocalTimeField estimate_local_time(const SamplePath& path, const GridSpec& grid) {
  if (path.positions.size() < 2) throw std::invalid_argument("estimate_local_time: path has no steps");
  const std::size_t n = grid.n_bins();
  std::vector<std::size_t> counts(n, 0);
  std::size_t inside = 0;
  const std::size_t steps = path.n_steps();
  for (std::size_t k = 0; k < steps; ++k) {
    const double u = (path.positions[k] - grid.x_min) / grid.eps;
    if (!(u >= 0.0) || u >= static_cast<double>(n)) continue;
    ++counts[static_cast<std::size_t>(u)];
    ++inside;
  }
  LocalTimeField field;
  field.grid = grid;
  field.t = path.dt * static_cast<double>(steps);
  field.coverage = static_cast<double>(inside) / static_cast<double>(steps);
  field.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) field.values[i] = static_cast<double>(counts[i]) * path.dt / grid.eps;
  return field;
}

double alpha(const LocalTimeField& field) {
  double sum = 0.0;
  for (double v : field.values) sum += v * v;
  return sum * field.grid.eps;
}

std::size_t bins_per_shift(double h, double eps) {
  const double ratio = h / eps;
  const double k = std::round(ratio);
  if (!(h > 0.0) || !(eps > 0.0) || k < 1.0 || std::abs(ratio - k) > 1e-9 * k)
    throw std::invalid_argument("l2_modulus: h must be a positive integer multiple of eps");
  return static_cast<std::size_t>(k);
}

double l2_modulus(const LocalTimeField& field, double h) {
  const std::size_t k = bins_per_shift(h, field.grid.eps);
  const auto& v = field.values;
  const std::size_t n = v.size();
  double sum = 0.0;
  const std::size_t edge = std::min(k, n);
  for (std::size_t i = 0; i < edge; ++i) sum += v[i] * v[i] + v[n - 1 - i] * v[n - 1 - i];
  for (std::size_t i = 0; i + k < n; ++i) {
    const double d = v[i + k] - v[i];
    sum += d * d;
  }
  return sum * field.grid.eps;
}

std::string to_csv(const LocalTimeField& field) {
  std::vector<std::vector<double>> rows;
  rows.reserve(field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i)
    rows.push_back({field.grid.x_min + (static_cast<double>(i) + 0.5) * field.grid.eps, field.values[i]});
  return numeric_csv({"x", "L"}, rows);
}

}  // namespace levylt
