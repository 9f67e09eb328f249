#include "levylt/kac.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "levylt/json_io.hpp"

#include "levylt/density.hpp"
#include "levylt/quadrature.hpp"
#include "transforms.hpp"

namespace levylt {

namespace {

using std::numbers::pi;

void require_time(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("kac: t must lie in (0, 1]");
}

// ∫_0^τ f(r) dr for f with integrable singularities at either end.
double split_time_integral(const std::function<double(double)>& f, double tau, quad::Tolerance tol) {
  const double half = 0.5 * tau;
  const double lower = quad::toward_zero(f, half, tol).value;
  const double upper = quad::toward_zero([&](double u) { return f(tau - u); }, half, tol).value;
  return lower + upper;
}

// t/ψ - (1 - e^{-tψ})/ψ², the time-integrated covariance kernel.
double covariance_kernel(double psi, double t) {
  const double x = t * psi;
  if (x < 1e-3) return t * t * (0.5 - x / 6.0 + x * x / 24.0);
  return t / psi + std::expm1(-x) / (psi * psi);
}

// Σ_{j,l<n} e^{-a|j-l|} dt², the doubly summed sampled covariance.
double sampled_kernel(double a, std::size_t n_steps, double dt) {
  const double n = static_cast<double>(n_steps);
  const double na = n * a;
  if (na < 1e-3) return dt * dt * (n * n - a * (n * n * n - n) / 3.0 + a * a * n * n * (n * n - 1.0) / 12.0);
  const double q = std::exp(-a);
  const double one_minus_q = -std::expm1(-a);
  const double one_minus_qn = -std::expm1(-na);
  return dt * dt * (n * (1.0 + q) / one_minus_q - 2.0 * q * one_minus_qn / (one_minus_q * one_minus_q));
}

// ∫_P^∞ Σ_j a_j cos(ω_j p) / p² dp.
double cosine_tail(const std::vector<std::pair<double, double>>& terms, double from) {
  double value = 0.0;
  const quad::Tolerance tol{1e-300, 1e-10};
  for (const auto& [coefficient, omega] : terms) {
    if (coefficient == 0.0) continue;
    if (omega == 0.0)
      value += coefficient / from;
    else
      value += coefficient * quad::oscillatory_tail([](double p) { return 1.0 / (p * p); }, omega, 0.0, from, tol).value;
  }
  return value;
}

void require_estimator(double t, std::size_t n_steps, double eps) {
  require_time(t);
  if (n_steps == 0) throw std::invalid_argument("estimator mean: n_steps must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("estimator mean: eps must be positive");
}

}  // namespace

double kac_moment(const MomentRequest& request) {
  const std::size_t m = request.points.size();
  if (m == 0 || m > 3) throw std::invalid_argument("kac_moment: between one and three points are supported");
  if (!(request.t > 0.0)) throw std::invalid_argument("kac_moment: t must be positive");
  const DensityEvaluator ev(request.exponent, 1e-12);
  const double t = request.t;

  // ∫_0^τ p_r(a) G(b, τ - r) dr with G the time-integrated density.
  auto two_level = [&](double a, double b, double tau, double rel) {
    auto f = [&](double r) {
      const double rest = tau - r;
      return rest > 0.0 ? ev.density(r, a) * ev.green(b, rest) : 0.0;
    };
    return split_time_integral(f, tau, {1e-15, rel});
  };

  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  double total = 0.0;
  do {
    std::vector<double> gaps(m);
    double previous = request.z;
    for (std::size_t j = 0; j < m; ++j) {
      gaps[j] = request.points[order[j]] - previous;
      previous = request.points[order[j]];
    }
    if (m == 1) {
      total += split_time_integral([&](double r) { return ev.density(r, gaps[0]); }, t, {1e-15, 1e-9});
    } else if (m == 2) {
      total += two_level(gaps[0], gaps[1], t, 1e-7);
    } else {
      auto f = [&](double r) {
        const double rest = t - r;
        return rest > 0.0 ? ev.density(r, gaps[0]) * two_level(gaps[1], gaps[2], rest, 1e-5) : 0.0;
      };
      total += split_time_integral(f, t, {1e-15, 1e-4});
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

double mean_alpha(const LevyExponent& exponent, double t) {
  require_time(t);
  const DensityEvaluator ev(exponent, 1e-12);
  auto f = [&](double r) { return (t - r) * ev.density(r, 0.0); };
  return 2.0 * quad::toward_zero(f, t, {1e-14, 1e-10}).value;
}

double mean_alpha_spectral(const LevyExponent& exponent, double t) {
  require_time(t);
  auto k = [&](double p) { return covariance_kernel(exponent(p), t); };
  const double knee = exponent.inverse(1.0 / t);
  const quad::Tolerance tol{1e-300, 1e-11};
  double value = quad::adaptive(k, 0.0, knee, tol).value;
  value += quad::power_tail(k, knee, exponent.beta_infinity(), tol).value;
  return 2.0 / pi * value;
}

double mean_sq_increment(const LevyExponent& exponent, double t, double h) {
  require_time(t);
  if (!(h > 0.0)) throw std::invalid_argument("mean_sq_increment: h must be positive");
  const DensityEvaluator ev(exponent, 1e-12);
  auto f = [&](double r) { return (t - r) * ev.second_diff(r, 0.0, h); };
  return 2.0 * quad::toward_zero(f, t, {1e-14, 1e-10}).value;
}

double mean_sq_increment_spectral(const LevyExponent& exponent, double t, double h) {
  require_time(t);
  if (!(h > 0.0)) throw std::invalid_argument("mean_sq_increment: h must be positive");
  auto k = [&](double q) { return covariance_kernel(exponent(q / h), t); };
  return 8.0 / (pi * h) * detail::sin2_transform(k, exponent.beta_infinity());
}

double estimator_mean_alpha(const LevyExponent& exponent, double t, std::size_t n_steps, double eps) {
  require_estimator(t, n_steps, eps);
  const double dt = t / static_cast<double>(n_steps);
  auto f = [&](double p) {
    const double s = std::sin(0.5 * eps * p);
    const double window = p == 0.0 ? 1.0 : 4.0 * s * s / (eps * eps * p * p);
    return window * sampled_kernel(dt * exponent(p), n_steps, dt);
  };
  const double top = std::max(exponent.inverse(45.0 / dt), 20.0 / eps);
  std::vector<double> breaks;
  for (double p = pi / eps; p < top && breaks.size() < 100000; p += pi / eps) breaks.push_back(p);
  const quad::Tolerance tol{1e-300, 1e-11};
  double value = quad::adaptive(f, 0.0, top, tol, breaks, 8 * breaks.size() + 400).value;
  // Beyond top the sampled kernel equals t·dt.
  value += 4.0 * t * dt / (eps * eps) * cosine_tail({{0.5, 0.0}, {-0.5, eps}}, top);
  return value / pi;
}

double estimator_mean_sq_increment(const LevyExponent& exponent, double t, double h, std::size_t n_steps,
                                   double eps) {
  require_estimator(t, n_steps, eps);
  const double ratio = h / eps;
  if (!(h > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
    throw std::invalid_argument("estimator mean: h must be a positive integer multiple of eps");
  const double dt = t / static_cast<double>(n_steps);
  auto f = [&](double p) {
    const double s = std::sin(0.5 * eps * p);
    const double window = p == 0.0 ? 1.0 : 4.0 * s * s / (eps * eps * p * p);
    const double c = std::sin(0.5 * h * p);
    return 2.0 * c * c * window * sampled_kernel(dt * exponent(p), n_steps, dt);
  };
  const double top = std::max(exponent.inverse(45.0 / dt), 20.0 / eps);
  const double period = pi / (h + eps);
  std::vector<double> breaks;
  for (double p = period; p < top && breaks.size() < 100000; p += period) breaks.push_back(p);
  const quad::Tolerance tol{1e-300, 1e-11};
  double value = quad::adaptive(f, 0.0, top, tol, breaks, 8 * breaks.size() + 400).value;
  // 8 sin²(hp/2) sin²(εp/2) = 2[1 - cos hp - cos εp + (cos(h+ε)p + cos(h-ε)p)/2]
  const std::vector<std::pair<double, double>> terms{
      {1.0, 0.0}, {-1.0, h}, {-1.0, eps}, {0.5, h + eps}, {0.5, std::abs(h - eps) < 1e-12 * h ? 0.0 : h - eps}};
  value += 2.0 * t * dt / (eps * eps) * cosine_tail(terms, top);
  return 2.0 / pi * value;
}

double remainder_shape(const LevyExponent& exponent, double h, double t) {
  const double beta = exponent.beta_infinity();
  if (beta > 1.5) return h * h * t * t * std::pow(exponent.inverse(1.0 / t), 3);
  if (beta == 1.5) return h * h * std::log(1.0 / h);
  const double psi = exponent(1.0 / h);
  return 1.0 / (h * psi * psi);
}

double remainder_shape_unit(const LevyExponent& exponent, double h) {
  const double beta = exponent.beta_infinity();
  if (beta > 1.5) return h * h;
  if (beta == 1.5) return h * h * std::log(1.0 / h);
  const double psi = exponent(1.0 / h);
  return 1.0 / (h * psi * psi);
}

VarianceBound variance_bound_check(const LevyExponent& exponent, double t, double h) {
  require_time(t);
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("variance_bound_check: h must lie in (0, 1)");
  VarianceBound b;
  b.t = t;
  b.h = h;
  b.g = remainder_shape(exponent, h, t);
  const double psi = exponent(1.0 / h);
  b.terms[0] = t * b.g / (h * psi);
  b.terms[1] = t * t * exponent.inverse(1.0 / t) / (h * psi * psi);
  b.terms[2] = t / (std::pow(h, 1.5) * std::pow(psi, 2.5));
  b.terms[3] = t * std::log(1.0 / h) / (h * h * psi * psi * psi);
  b.dominant = static_cast<std::size_t>(std::max_element(b.terms.begin(), b.terms.end()) - b.terms.begin());
  for (double term : b.terms) b.total += term;
  return b;
}

std::string to_json(const VarianceBound& bound) {
  nlohmann::ordered_json j;
  j["t"] = bound.t;
  j["h"] = bound.h;
  j["g"] = bound.g;
  j["terms"] = bound.terms;
  j["dominant"] = bound.dominant;
  j["total"] = bound.total;
  return dump_json(j);
}

}  // namespace levylt
