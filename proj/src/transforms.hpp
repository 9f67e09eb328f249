#pragma once

#include "levylt/quadrature.hpp"

namespace levylt::detail {

// ∫_0^∞ sin²(q/2) f(q) dq for f smooth and positive with f(q) q^decay bounded.
double sin2_transform(const quad::Integrand& f, double decay, quad::Tolerance tol = {1e-300, 1e-12});

// ∫_0^∞ sin⁴(q/2) f(q) dq under the same assumptions.
double sin4_transform(const quad::Integrand& f, double decay, quad::Tolerance tol = {1e-300, 1e-12});

}  // namespace levylt::detail
