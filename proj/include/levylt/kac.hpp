#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "levylt/exponent.hpp"

namespace levylt {

/// E^z[∏_i L^{x_i}_t] for up to three levels.
struct MomentRequest {
  LevyExponent exponent = LevyExponent::stable(2.0);
  double t = 1.0;
  std::vector<double> points;
  double z = 0.0;
};

/// Permutation sum of time-simplex integrals of transition densities.
/// Relative accuracy about 1e-6 for one level and 1e-4 otherwise.
double kac_moment(const MomentRequest& request);

/// E α_t = 2∫_0^t (t-r) p_r(0) dr, by time quadrature of densities.
double mean_alpha(const LevyExponent& exponent, double t);
/// The same mean from (2/π)∫_0^∞ [t/ψ - (1 - e^{-tψ})/ψ²] dp.
double mean_alpha_spectral(const LevyExponent& exponent, double t);

/// E∫(L^{x+h}_t - L^x_t)² dx = 4∫_0^t (t-r)(p_r(0) - p_r(h)) dr.
double mean_sq_increment(const LevyExponent& exponent, double t, double h);
/// The same mean from (8/π)∫_0^∞ sin²(hp/2)[t/ψ - (1 - e^{-tψ})/ψ²] dp.
double mean_sq_increment_spectral(const LevyExponent& exponent, double t, double h);

/// Exact means of the binned estimators built by estimate_local_time from a
/// path sampled at n_steps left endpoints of [0, t] on a grid of width eps
/// with a uniformly random offset. They converge to mean_alpha and
/// mean_sq_increment as dt and eps go to zero.
double estimator_mean_alpha(const LevyExponent& exponent, double t, std::size_t n_steps, double eps);
/// h must be a positive integer multiple of eps.
double estimator_mean_sq_increment(const LevyExponent& exponent, double t, double h, std::size_t n_steps,
                                   double eps);

/// Shape g(h, t) of the remainder in E J_h = 4c_{ψ,h,0}t + O(g(h, t)), by
/// the index at infinity; the slowly varying factor at β = 3/2 is log(1/h).
double remainder_shape(const LevyExponent& exponent, double h, double t);
/// Shape of the remainder at t = 1.
double remainder_shape_unit(const LevyExponent& exponent, double h);

struct VarianceBound {
  double t = 0.0;
  double h = 0.0;
  double g = 0.0;
  // t g/(hψ(1/h)), t²ψ^{-1}(1/t)/(hψ²(1/h)), t/(h^{3/2}ψ^{5/2}(1/h)), t log(1/h)/(h²ψ³(1/h))
  std::array<double, 4> terms{};
  std::size_t dominant = 0;
  double total = 0.0;
};

/// Order-of-magnitude variance bound for J_h with unit constant; h in (0, 1).
VarianceBound variance_bound_check(const LevyExponent& exponent, double t, double h);

std::string to_json(const VarianceBound& bound);

}  // namespace levylt
