#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "levylt/parallel.hpp"
#include "levylt/rng.hpp"
#include "levylt/stats.hpp"

namespace stats = levylt::stats;

TEST(Stats, MeanVarianceStandardError) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(stats::mean(xs), 2.5);
  EXPECT_DOUBLE_EQ(stats::variance(xs), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(stats::standard_error(xs), std::sqrt(5.0 / 12.0));
  EXPECT_EQ(stats::variance(std::vector<double>{1.0}), 0.0);
}

TEST(Stats, KolmogorovSurvival) {
  EXPECT_NEAR(stats::kolmogorov_survival(0.5), 0.9639452436648751, 1e-12);
  EXPECT_NEAR(stats::kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(stats::kolmogorov_survival(1.36), 0.049485876755377876, 1e-12);
  EXPECT_NEAR(stats::kolmogorov_survival(1.18 - 1e-12), stats::kolmogorov_survival(1.18 + 1e-12), 1e-10);
  EXPECT_EQ(stats::kolmogorov_survival(0.0), 1.0);
  EXPECT_LT(stats::kolmogorov_survival(5.0), 1e-20);
}

TEST(Stats, KsTwoSample) {
  const std::vector<double> a{0.1, 0.4, 0.7};
  const auto same = stats::ks_two_sample(a, a);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_DOUBLE_EQ(stats::ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{3, 4}).statistic, 1.0);
  EXPECT_DOUBLE_EQ(stats::ks_two_sample(std::vector<double>{1, 2, 3, 4}, std::vector<double>{3, 4, 5, 6}).statistic, 0.5);
  EXPECT_THROW((void)stats::ks_two_sample(a, std::vector<double>{}), std::invalid_argument);

  levylt::Rng rng(3);
  std::vector<double> x(2000);
  std::vector<double> y(2000);
  std::vector<double> shifted(2000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
    shifted[i] = rng.normal() + 0.3;
  }
  const auto null = stats::ks_two_sample(x, y);
  EXPECT_GT(null.p_value, 0.0);
  EXPECT_LE(null.p_value, 1.0);
  EXPECT_LT(stats::ks_two_sample(x, shifted).p_value, 1e-6);
}

TEST(Stats, KsNullPValuesAreRoughlyUniform) {
  levylt::Rng rng(5);
  int rejected = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> x(300);
    std::vector<double> y(300);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    if (stats::ks_two_sample(x, y).p_value < 0.1) ++rejected;
  }
  EXPECT_NEAR(rejected / static_cast<double>(trials), 0.1, 0.05);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  auto run = [](std::size_t threads) {
    std::vector<double> out(1000);
    levylt::parallel_for(out.size(), threads, [&](std::size_t i) {
      levylt::Rng rng(levylt::derive_seed(1, 0, i));
      out[i] = rng.normal();
    });
    return out;
  };
  const auto serial = run(1);
  EXPECT_EQ(serial, run(4));
  EXPECT_EQ(serial, run(17));
}

TEST(Parallel, RethrowsWorkerErrors) {
  std::atomic<int> calls{0};
  EXPECT_THROW(levylt::parallel_for(100, 3,
                                    [&](std::size_t i) {
                                      ++calls;
                                      if (i == 10) throw std::runtime_error("boom");
                                    }),
               std::runtime_error);
  EXPECT_LE(calls.load(), 100);
  levylt::parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Parallel, EnvironmentOverridesRequest) {
  ::unsetenv(levylt::kThreadsEnv);
  EXPECT_EQ(levylt::resolve_threads(3), 3u);
  EXPECT_GE(levylt::resolve_threads(), 1u);
  ::setenv(levylt::kThreadsEnv, "5", 1);
  EXPECT_EQ(levylt::resolve_threads(3), 5u);
  ::setenv(levylt::kThreadsEnv, "junk", 1);
  EXPECT_EQ(levylt::resolve_threads(3), 3u);
  ::unsetenv(levylt::kThreadsEnv);
}
