#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

// Quadrature building blocks shared by the density, constants and Kac modules.
// Every routine returns an Estimate or throws QuadratureError; a budget that
// runs out before the tolerance is met is always an error, never a value.

namespace levylt::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;

  Estimate& operator+=(const Estimate& other) noexcept {
    value += other.value;
    error += other.error;
    evaluations += other.evaluations;
    return *this;
  }
};

inline Estimate operator*(double scale, Estimate e) noexcept {
  e.value *= scale;
  e.error *= std::abs(scale);
  return e;
}

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;

  [[nodiscard]] double target(double magnitude) const noexcept;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One 21-point Kronrod rule on [a, b], error from the embedded 10-point Gauss rule.
Estimate kronrod21(const Integrand& f, double a, double b);

/// Globally adaptive bisection on [a, b] starting from the given breakpoints
/// (a and b included implicitly). Interior points are never sampled at the
/// ends, so integrable endpoint singularities are allowed.
Estimate adaptive(const Integrand& f, double a, double b, Tolerance tol,
                  std::span<const double> breakpoints = {}, std::size_t max_intervals = 4000);

/// ∫_0^w g(u) du for an integrand that may be singular at u = 0: geometric
/// panels [w 2^{-k-1}, w 2^{-k}] and a geometric tail correction once the
/// panel contributions settle into a constant ratio. Callers express the
/// integrand in the offset from the singular endpoint so that no precision is
/// lost near it.
Estimate toward_zero(const Integrand& g, double w, Tolerance tol, int max_panels = 600);

/// ∫_a^∞ for integrands with f(p)·p^decay bounded at infinity (decay > 1),
/// via the substitution p = a v^{-1/(decay-1)}.
Estimate power_tail(const Integrand& f, double a, double decay, Tolerance tol);

/// ∫_a^∞ for a positive integrand decaying at least algebraically: panels
/// [a 2^k, a 2^{k+1}] with geometric tail correction.
Estimate doubling_tail(const Integrand& f, double a, Tolerance tol, int max_panels = 200);

/// ∫_a^∞ g(p) cos(ωp + φ) dp for g smooth and eventually monotone to zero.
/// Panels run between consecutive zeros of the cosine; the alternating series
/// of panel contributions is extrapolated with Wynn's epsilon algorithm.
Estimate oscillatory_tail(const Integrand& g, double omega, double phase, double a, Tolerance tol,
                          std::size_t max_panels = 5000);

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the best
/// estimate and the difference between the last two diagonal estimates.
std::pair<double, double> wynn_epsilon(std::span<const double> partial_sums);

}  // namespace levylt::quad
