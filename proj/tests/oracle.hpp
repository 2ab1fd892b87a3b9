#pragma once

// Independent reference computations used by the unit tests: direct
// quadrature of the defining integrals and contour-integral derivatives.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "freespec/measure.hpp"
#include "freespec/quadrature.hpp"
#include "freespec/transforms.hpp"

namespace oracle {

using C = std::complex<double>;

/// int rho(l) / (z - l) dl by adaptive quadrature on [lo, hi] with the
/// substitution l = c + r sin t (handles square-root and inverse-square-root edges).
inline C cauchy_quadrature(const std::function<double(double)>& rho, double lo, double hi, C z) {
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  auto part = [&](bool imag) {
    return freespec::integrate(
               [&](double t) {
                 const double l = c + r * std::sin(t);
                 const C v = rho(l) * r * std::cos(t) / (z - l);
                 return imag ? v.imag() : v.real();
               },
               -std::numbers::pi / 2, std::numbers::pi / 2, 1e-15, 1e-13)
        .value;
  };
  return {part(false), part(true)};
}

/// n-th derivative of an analytic f at z from the Cauchy integral formula on
/// a circle of radius r (trapezoid rule, spectrally accurate).
inline C contour_derivative(const std::function<C(C)>& f, C z, int n, double r, int points = 256) {
  C acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const C e = std::polar(1.0, 2.0 * std::numbers::pi * k / points);
    acc += f(z + r * e) / std::pow(e, n);
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return acc * fact / (double(points) * std::pow(r, n));
}

}  // namespace oracle
