#pragma once

#include <cmath>

#include "freespec/jet.hpp"

// Closed-form Cauchy transforms, templated on the scalar so the same
// expression yields values (Complex) and Taylor coefficients (Jet<K>).
// All roots are written as sqrt(z - lo) * sqrt(z - hi), which is analytic off
// [lo, hi] and behaves like z at infinity; the quotients are rationalized so
// that no cancellation occurs for large |z|.

namespace freespec::closed {

using std::sqrt;

/// sqrt(z - r) * sqrt(z + r), the branch of sqrt(z^2 - r^2) that is ~ z at infinity.
template <class T>
T edge_root(const T& z, double r) {
  return sqrt(z - r) * sqrt(z + r);
}

template <class T>
T semicircle(double variance, const T& z) {
  const T s = edge_root(z, 2.0 * std::sqrt(variance));
  return 2.0 / (z + s);
}

template <class T>
T arcsine(const T& z) {
  return 1.0 / edge_root(z, 2.0);
}

template <class T>
T bernoulli(const T& z) {
  return z / (z * z - 1.0);
}

template <class T>
T dirac(double c, const T& z) {
  return 1.0 / (z - c);
}

/// Kesten-McKay law compressed by alpha; alpha = 1 gives the plain law.
template <class T>
T kesten_mckay_compressed(double eta, double alpha, const T& z) {
  const T s = edge_root(z, 2.0 * std::sqrt(alpha * (eta - alpha)));
  return 2.0 * (eta - alpha) / (z * (eta - 2.0 * alpha) + eta * s);
}

template <class T>
T kesten_mckay(double eta, const T& z) {
  return kesten_mckay_compressed(eta, 1.0, z);
}

/// Bernoulli law compressed by alpha in (0, 1]; atoms at +-1 for alpha > 1/2.
template <class T>
T bernoulli_compressed(double alpha, const T& z) {
  const T s = edge_root(z, 2.0 * std::sqrt(alpha * (1.0 - alpha)));
  if (alpha > 0.5) return (z * (2.0 * alpha - 1.0) + s) / (2.0 * alpha * (z * z - 1.0));
  return 2.0 * (1.0 - alpha) / (s - z * (2.0 * alpha - 1.0));
}

/// Measure orthogonalizing P_{n+1} = (x - a) P_n - b P_{n-1}, P_0 = 1, P_1 = x.
template <class T>
T orthopoly(double a, double b, const T& z) {
  const double r = 2.0 * std::sqrt(b);
  const T s = sqrt(z - (a + r)) * sqrt(z - (a - r));
  return 2.0 / (a + z + s);
}

}  // namespace freespec::closed
