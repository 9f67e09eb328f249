#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "levylt/kac.hpp"
#include "levylt/localtime.hpp"
#include "levylt/rng.hpp"
#include "levylt/simulate.hpp"
#include "levylt/stats.hpp"

using levylt::GridSpec;
using levylt::LevyExponent;
using levylt::SamplePath;

namespace {

SamplePath constant_path(std::size_t n, double horizon) {
  SamplePath p;
  p.dt = horizon / static_cast<double>(n);
  p.positions.assign(n + 1, 0.0);
  return p;
}

SamplePath random_path(std::uint64_t i, std::size_t n = 2000) {
  const auto e = i % 2 == 0 ? LevyExponent::stable(1.5) : LevyExponent::parse("mix:1*2+0.3*1.1");
  return levylt::simulate_path({e, 1.0, n, levylt::derive_seed(77, 0, i)});
}

std::vector<double> alphas(const LevyExponent& e, std::size_t n_steps, double eps, std::size_t n_paths,
                           std::uint64_t stream) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n_paths; ++i) {
    const auto path = levylt::simulate_path({e, 1.0, n_steps, levylt::derive_seed(8, stream, i)});
    levylt::Rng offset(i + 1000 * stream);
    out.push_back(levylt::alpha(levylt::estimate_local_time(path, levylt::default_grid(path, eps, offset.uniform()))));
  }
  return out;
}

}  // namespace

TEST(LocalTime, GridValidation) {
  EXPECT_EQ((GridSpec{-0.5, 0.5, 0.1}.n_bins()), 10u);
  EXPECT_THROW((void)(GridSpec{0.0, 0.05, 0.1}.n_bins()), std::invalid_argument);
  EXPECT_THROW((void)(GridSpec{0.0, 0.25, 0.1}.n_bins()), std::invalid_argument);
  EXPECT_THROW((void)(GridSpec{0.0, 1.0, 0.0}.n_bins()), std::invalid_argument);
}

TEST(LocalTime, ConstantPath) {
  const auto path = constant_path(10, 1.0);
  const auto field = levylt::estimate_local_time(path, {-0.55, 0.45, 0.1});
  int nonzero = 0;
  for (double v : field.values)
    if (v != 0.0) {
      ++nonzero;
      EXPECT_DOUBLE_EQ(v, 10.0);
    }
  EXPECT_EQ(nonzero, 1);
  EXPECT_DOUBLE_EQ(levylt::alpha(field), 10.0);
  EXPECT_EQ(field.coverage, 1.0);
}

TEST(LocalTime, ZeroFieldFunctionals) {
  levylt::LocalTimeField field;
  field.grid = {0.0, 1.0, 0.1};
  field.values.assign(10, 0.0);
  EXPECT_EQ(levylt::alpha(field), 0.0);
  EXPECT_EQ(levylt::l2_modulus(field, 0.3), 0.0);
  EXPECT_THROW((void)levylt::l2_modulus(field, 0.15), std::invalid_argument);
  EXPECT_THROW((void)levylt::l2_modulus(field, 0.0), std::invalid_argument);
}

TEST(LocalTime, OccupationIdentityOnRandomPaths) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto path = random_path(i);
    const auto grid = levylt::default_grid(path, 0.01, 0.37);
    const auto field = levylt::estimate_local_time(path, grid);
    levylt::Rng pick(i);
    std::vector<bool> in_union(field.values.size());
    for (std::size_t b = 0; b < in_union.size(); ++b) in_union[b] = pick.uniform() < 0.4;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < path.n_steps(); ++k) {
      const auto b = static_cast<std::size_t>((path.positions[k] - grid.x_min) / grid.eps);
      if (in_union[b]) ++hits;
    }
    long double space_side = 0.0L;
    for (std::size_t b = 0; b < in_union.size(); ++b)
      if (in_union[b]) space_side += field.values[b] * grid.eps;
    EXPECT_NEAR(static_cast<double>(hits) * path.dt, static_cast<double>(space_side),
                64 * std::numeric_limits<double>::epsilon())
        << i;
  }
}

TEST(LocalTime, MassConservation) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto path = random_path(i);
    const auto field = levylt::estimate_local_time(path, levylt::default_grid(path, 0.02));
    double mass = 0.0;
    for (double v : field.values) {
      EXPECT_GE(v, 0.0);
      mass += v * field.grid.eps;
    }
    EXPECT_EQ(field.coverage, 1.0);
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
  const auto path = random_path(3);
  const auto partial = levylt::estimate_local_time(path, {0.0, 0.5, 0.01});
  double mass = 0.0;
  for (double v : partial.values) mass += v * partial.grid.eps;
  EXPECT_LT(partial.coverage, 1.0);
  EXPECT_NEAR(mass, partial.coverage, 1e-12);
}

TEST(LocalTime, ModulusIsBoundedByFourAlpha) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto path = random_path(i);
    const auto field = levylt::estimate_local_time(path, levylt::default_grid(path, 0.01, 0.5));
    const double a = levylt::alpha(field);
    for (double h : {0.01, 0.05, 0.2, 100.0}) EXPECT_LE(levylt::l2_modulus(field, h), 4.0 * a * (1 + 1e-12));
    EXPECT_NEAR(levylt::l2_modulus(field, 100.0), 2.0 * a, 1e-12 * a);
  }
}

TEST(LocalTime, ShiftEquivariance) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto path = random_path(i);
    const GridSpec grid = levylt::default_grid(path, 0.125);
    const auto before = levylt::estimate_local_time(path, grid);
    for (double& x : path.positions) x += 0.5;
    const auto after = levylt::estimate_local_time(path, {grid.x_min + 0.5, grid.x_max + 0.5, grid.eps});
    EXPECT_EQ(levylt::alpha(before), levylt::alpha(after));
    EXPECT_EQ(levylt::l2_modulus(before, 0.25), levylt::l2_modulus(after, 0.25));
  }
}

TEST(LocalTime, GaussianMeanAlpha) {
  const auto a = alphas(LevyExponent::stable(2.0), 10'000, 0.01, 2000, 0);
  const double exact = 4.0 / (3.0 * std::sqrt(std::numbers::pi));
  EXPECT_NEAR(levylt::stats::mean(a), exact, 3.0 * levylt::stats::standard_error(a) + 0.1 * exact);
  EXPECT_NEAR(levylt::stats::mean(a), levylt::estimator_mean_alpha(LevyExponent::stable(2.0), 1.0, 10'000, 0.01),
              3.0 * levylt::stats::standard_error(a));
}

TEST(LocalTime, StableMeanModulus) {
  const auto e = LevyExponent::stable(1.5);
  const double h = 0.05;
  const double eps = 0.001;
  const std::size_t n = 100'000;
  std::vector<double> j;
  for (std::size_t i = 0; i < 400; ++i) {
    const auto path = levylt::simulate_path({e, 1.0, n, levylt::derive_seed(9, 0, i)});
    levylt::Rng offset(i);
    j.push_back(levylt::l2_modulus(levylt::estimate_local_time(path, levylt::default_grid(path, eps, offset.uniform())), h));
  }
  const double mean = levylt::stats::mean(j);
  const double se = levylt::stats::standard_error(j);
  const double kac = levylt::mean_sq_increment_spectral(e, 1.0, h);
  EXPECT_NEAR(mean, kac, 3.0 * se + 0.1 * kac);
  EXPECT_NEAR(mean, levylt::estimator_mean_sq_increment(e, 1.0, h, n, eps), 3.0 * se);
}

TEST(LocalTime, RefinementConsistency) {
  const auto gauss = LevyExponent::stable(2.0);
  const auto coarse = alphas(gauss, 10'000, 0.01, 2000, 1);
  const auto fine = alphas(gauss, 20'000, 0.005, 2000, 2);
  const double se = std::hypot(levylt::stats::standard_error(coarse), levylt::stats::standard_error(fine));
  EXPECT_LT(std::abs(levylt::stats::mean(coarse) - levylt::stats::mean(fine)), 3.0 * se);

  // At the experiment resolution the exact shift of the stable mean under
  // refinement stays below the Monte Carlo error of 2000 paths.
  const auto e = LevyExponent::stable(1.5);
  const auto sample = alphas(e, 100'000, 0.001, 200, 3);
  const double se_2000 = std::sqrt(levylt::stats::variance(sample) / 2000.0);
  const double shift = levylt::estimator_mean_alpha(e, 1.0, 200'000, 0.0005) -
                       levylt::estimator_mean_alpha(e, 1.0, 100'000, 0.001);
  EXPECT_LT(std::abs(shift), 3.0 * se_2000) << shift << " " << se_2000;
}

TEST(LocalTime, FieldCsv) {
  const auto field = levylt::estimate_local_time(constant_path(4, 1.0), {-0.5, 0.5, 0.5});
  EXPECT_EQ(levylt::to_csv(field), "x,L\n-0.25,0\n0.25,2\n");
}
