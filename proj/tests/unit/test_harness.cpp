#include <gtest/gtest.h>

#include <cmath>

#include "levylt/constants.hpp"
#include "levylt/harness.hpp"
#include "levylt/kac.hpp"

using levylt::LevyExponent;

namespace {

levylt::CltConfig small_clt() {
  levylt::CltConfig c;
  c.n_paths = 100;
  c.grid.n_steps = 5000;
  c.h_schedule = {0.2, 0.1};
  c.grid.eps = 0.01;
  return c;
}

}  // namespace

TEST(Harness, CenteringAnnihilatesConstants) {
  const auto e = LevyExponent::stable(1.5);
  const std::vector<double> j(50, 0.7);
  for (double z : levylt::normalize(e, 0.05, j, 0.7)) EXPECT_EQ(z, 0.0);
  EXPECT_EQ(levylt::parse_centering("kac_exact"), levylt::Centering::kac_exact);
  EXPECT_EQ(levylt::to_string(levylt::parse_centering("estimator_exact")), "estimator_exact");
  EXPECT_THROW((void)levylt::parse_centering("other"), std::invalid_argument);
}

TEST(Harness, NormalizationMatchesStablePower) {
  for (double beta : {1.2, 1.5, 1.8, 2.0})
    for (double h : {0.2, 0.05, 0.001}) {
      const double expected = std::pow(h, (1.0 - 2.0 * beta) / 2.0);
      EXPECT_NEAR(levylt::clt_normalization(LevyExponent::stable(beta), h), expected, 1e-12 * expected);
    }
}

TEST(Harness, CenteringModesConvergeForStable) {
  const auto e = LevyExponent::stable(1.5);
  double previous = 1e300;
  for (double h : {0.2, 0.1, 0.05, 0.02}) {
    const double closed = 4.0 * levylt::c_beta_0(1.5) * std::sqrt(h);
    const double shift = levylt::clt_normalization(e, h) * std::abs(levylt::mean_sq_increment_spectral(e, 1.0, h) - closed);
    EXPECT_LT(shift, previous) << h;
    previous = shift;
  }
}

TEST(Harness, CltReportShapeAndDeterminism) {
  auto c = small_clt();
  c.threads = 1;
  const auto serial = levylt::clt_experiment(c);
  c.threads = 3;
  const auto parallel = levylt::clt_experiment(c);
  EXPECT_EQ(levylt::to_json(serial, false), levylt::to_json(parallel, false));
  ASSERT_EQ(serial.rows.size(), 2u);
  EXPECT_EQ(serial.mixture.size(), 100u);
  for (const auto& row : serial.rows) {
    EXPECT_EQ(row.z.size(), 100u);
    EXPECT_GE(row.p_value, 0.0);
    EXPECT_LE(row.p_value, 1.0);
    EXPECT_GT(row.variance_ratio, 0.0);
    EXPECT_EQ(row.center, row.mean_estimator);
  }
  EXPECT_EQ(serial.min_coverage, 1.0);
  EXPECT_NE(levylt::to_json(serial, true).find("runtime_seconds"), std::string::npos);
  EXPECT_EQ(levylt::to_json(serial, false).find("runtime_seconds"), std::string::npos);

  c.centering = levylt::Centering::kac_exact;
  const auto kac = levylt::clt_experiment(c);
  for (std::size_t k = 0; k < kac.rows.size(); ++k) {
    const auto& a = kac.rows[k];
    const auto& b = serial.rows[k];
    EXPECT_NEAR(a.z[7] - b.z[7], a.normalization * (b.center - a.center), 1e-9);
    EXPECT_NEAR(a.variance_z, b.variance_z, 1e-9 * b.variance_z);
  }
}

TEST(Harness, CltRejectsBadConfigs) {
  auto c = small_clt();
  c.n_paths = 99;
  EXPECT_THROW((void)levylt::clt_experiment(c), std::invalid_argument);
  c = small_clt();
  c.h_schedule = {0.2, 0.015};
  EXPECT_THROW((void)levylt::clt_experiment(c), std::invalid_argument);
  c = small_clt();
  c.h_schedule = {0.1, 0.2};
  EXPECT_THROW((void)levylt::clt_experiment(c), std::invalid_argument);
  c = small_clt();
  c.exponent = LevyExponent::parse("mix:1*1.8+1*1.2");
  c.centering = levylt::Centering::stable_closed_form;
  EXPECT_THROW((void)levylt::clt_experiment(c), std::invalid_argument);
}

TEST(Harness, DefaultEpsResolvesSchedule) {
  auto c = small_clt();
  c.grid.eps.reset();
  c.h_schedule = {0.2, 0.1, 0.05};
  const auto r = levylt::clt_experiment(c);
  EXPECT_DOUBLE_EQ(r.eps, 0.05 / levylt::kDefaultBinsPerH);
}

TEST(Harness, ScalingExperiment) {
  levylt::ScalingConfig c;
  c.n_paths = 400;
  c.t_values = {1.0, 0.5};
  const auto r = levylt::scaling_experiment(c);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].ratio_1, 1.0);
  EXPECT_EQ(r.rows[0].ratio_2, 1.0);
  EXPECT_DOUBLE_EQ(r.exponent_power, 1.5);
  EXPECT_NEAR(r.rows[1].ratio_1, 1.0, 3.0 * r.rows[1].ratio_1_se);
  EXPECT_NEAR(r.rows[1].ratio_2, 1.0, 3.0 * r.rows[1].ratio_2_se);
  EXPECT_DOUBLE_EQ(r.rows[1].eps, 0.01 * std::sqrt(0.5));
  c.exponent = LevyExponent::parse("mix:1*1.8+1*1.2");
  EXPECT_THROW((void)levylt::scaling_experiment(c), std::invalid_argument);
}

TEST(Harness, MeanConvergenceExperiment) {
  levylt::MeanConvergenceConfig c;
  c.n_paths = 200;
  c.grid.n_steps = 20'000;
  c.grid.eps = 0.005;
  const auto r = levylt::mean_convergence_experiment(c);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.mean_j, row.mean_estimator, 3.0 * row.se_j) << row.h;
    EXPECT_NEAR(row.leading, 4.0 * levylt::c_beta_0(1.5) * std::sqrt(row.h), 1e-9);
    EXPECT_NEAR(row.scaled_mean, row.mean_j / std::sqrt(row.h), 1e-12);
    EXPECT_GT(row.bound.total, 0.0);
  }
  c.n_paths = 0;
  EXPECT_THROW((void)levylt::mean_convergence_experiment(c), std::invalid_argument);
}

TEST(Harness, MomentBoundExperiment) {
  levylt::MomentConfig c;
  c.n_paths = 300;
  c.grid.n_steps = 5000;
  const auto r = levylt::moment_bound_experiment(c);
  ASSERT_EQ(r.rows.size(), 5u);
  for (const auto& row : r.rows) {
    for (double ratio : row.ratios) EXPECT_TRUE(std::isfinite(ratio));
    EXPECT_LE(row.norms[0], row.norms[1]);
    EXPECT_LE(row.norms[1], row.norms[2]);
    EXPECT_NEAR(row.norms[0], row.mean_alpha_exact, 3.0 * row.mean_alpha_se + 0.15 * row.mean_alpha_exact) << row.t;
  }
  EXPECT_TRUE(r.consistent);
  c.t_grid.clear();
  EXPECT_THROW((void)levylt::moment_bound_experiment(c), std::invalid_argument);
}
