#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "levylt/exponent.hpp"
#include "levylt/rng.hpp"

namespace levylt {

struct PathConfig {
  LevyExponent exponent = LevyExponent::stable(2.0);
  double horizon = 1.0;
  std::size_t n_steps = 1;
  std::uint64_t seed = 0;
};

/// Positions X_{k dt}, k = 0..n_steps, with positions[0] = 0.
struct SamplePath {
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> positions;

  [[nodiscard]] std::size_t n_steps() const noexcept { return positions.empty() ? 0 : positions.size() - 1; }
};

/// One draw of X_dt for ψ(λ) = |λ|^β: Gaussian with variance 2dt at β = 2,
/// otherwise dt^{1/β} times a Chambers–Mallows–Stuck symmetric stable variate.
double sample_stable_increment(Rng& rng, double beta, double dt);

/// Sum of i.i.d. increments; mixture component c|λ|^β runs on time scale c·dt.
/// Deterministic in config.seed.
SamplePath simulate_path(const PathConfig& config);

/// Little-endian dump: "LEVYPATH", u32 version, u64 n_steps, f64 dt, u64 seed,
/// then n_steps + 1 f64 positions.
void write_path(const std::filesystem::path& file, const SamplePath& path);
SamplePath read_path(const std::filesystem::path& file);

}  // namespace levylt
