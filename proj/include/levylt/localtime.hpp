#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "levylt/simulate.hpp"

namespace levylt {

/// Bins [x_min + i eps, x_min + (i+1) eps), i = 0..n_bins-1.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double eps = 0.1;

  /// Throws std::invalid_argument unless the range holds a whole number of bins.
  [[nodiscard]] std::size_t n_bins() const;
};

/// Grid covering the path range padded by two bins on each side, with bin
/// edges shifted by offset·eps, offset in [0, 1).
GridSpec default_grid(const SamplePath& path, double eps, double offset = 0.0);

/// Binned occupation density; values in time per unit space.
struct LocalTimeField {
  GridSpec grid;
  std::vector<double> values;
  double t = 0.0;
  double coverage = 0.0;  // fraction of sampled path time inside the grid

  [[nodiscard]] bool covered() const noexcept { return coverage == 1.0; }
};

/// values[i] = dt·#{k < n_steps : X_{k dt} in bin i}/eps.
LocalTimeField estimate_local_time(const SamplePath& path, const GridSpec& grid);

/// Σ values²·eps; biased low when the field is not fully covered.
double alpha(const LocalTimeField& field);

/// Σ_i (values[i+k] - values[i])²·eps with h = k·eps and zero outside the grid.
/// Throws std::invalid_argument when h is not a positive multiple of eps.
double l2_modulus(const LocalTimeField& field, double h);

/// Number of bins k with h = k·eps, or throws std::invalid_argument.
std::size_t bins_per_shift(double h, double eps);

/// Columns x (bin centre) and L.
std::string to_csv(const LocalTimeField& field);

}  // namespace levylt
