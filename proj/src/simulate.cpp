#include "levylt/simulate.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace levylt {

namespace {

constexpr char kMagic[8] = {'L', 'E', 'V', 'Y', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("read_path: truncated file");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

double sample_stable_increment(Rng& rng, double beta, double dt) {
  if (!(beta > 1.0 && beta <= 2.0)) throw std::invalid_argument("sample_stable_increment: beta must lie in (1, 2]");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_stable_increment: dt must be positive");
  if (beta == 2.0) return std::sqrt(2.0 * dt) * rng.normal();
  const double u = std::numbers::pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double s = std::sin(beta * u) / std::pow(std::cos(u), 1.0 / beta) *
                   std::pow(std::cos((1.0 - beta) * u) / w, (1.0 - beta) / beta);
  return std::pow(dt, 1.0 / beta) * s;
}

SamplePath simulate_path(const PathConfig& config) {
  if (!(config.horizon > 0.0)) throw std::invalid_argument("simulate_path: horizon must be positive");
  if (config.n_steps == 0) throw std::invalid_argument("simulate_path: n_steps must be positive");
  SamplePath path;
  path.dt = config.horizon / static_cast<double>(config.n_steps);
  path.seed = config.seed;
  path.positions.assign(config.n_steps + 1, 0.0);
  Rng rng(config.seed);
  const auto& components = config.exponent.components();
  double x = 0.0;
  for (std::size_t k = 1; k <= config.n_steps; ++k) {
    for (const auto& c : components) x += sample_stable_increment(rng, c.index, c.weight * path.dt);
    path.positions[k] = x;
  }
  return path;
}

void write_path(const std::filesystem::path& file, const SamplePath& path) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("write_path: cannot open " + file.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, path.n_steps());
  put<double>(out, path.dt);
  put<std::uint64_t>(out, path.seed);
  for (double x : path.positions) put<double>(out, x);
  if (!out) throw std::runtime_error("write_path: write failed for " + file.string());
}

SamplePath read_path(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("read_path: cannot open " + file.string());
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("read_path: bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("read_path: unsupported version");
  const auto n = get<std::uint64_t>(in);
  SamplePath path;
  path.dt = get<double>(in);
  path.seed = get<std::uint64_t>(in);
  path.positions.resize(n + 1);
  for (auto& x : path.positions) x = get<double>(in);
  return path;
}

}  // namespace levylt
