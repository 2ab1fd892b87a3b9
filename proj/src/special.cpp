#include "freespec/special.hpp"

#include <cmath>
#include <numbers>

namespace freespec {

namespace {

using C = std::complex<double>;

constexpr double kStep = 0.5;
constexpr int kNodes = 40;

// Trapezoid rule for w(z) = (i/pi) int exp(-t^2)/(z-t) dt with the pole
// correction term; nodes are shifted by half a step when z sits near one.
C faddeeva_upper(C z) {
  const double pi = std::numbers::pi;
  const double frac = z.real() / kStep - std::floor(z.real() / kStep);
  const double off = (frac >= 0.25 && frac <= 0.75) ? 0.0 : 0.5;
  C s = 0.0;
  for (int n = -kNodes; n <= kNodes; ++n) {
    const double t = (n + off) * kStep;
    s += std::exp(-t * t) / (z - t);
  }
  s *= C(0.0, kStep / pi);
  if (z.imag() < pi / kStep) {
    const C e = std::exp(C(0.0, -2.0 * pi) * (z - off * kStep) / kStep);
    s += 2.0 * std::exp(-z * z) / (1.0 - e);
  }
  return s;
}

C dawson_series(C z) {
  // D(z) = sum_n (-1)^n 2^n z^(2n+1) / (2n+1)!!
  const C z2 = z * z;
  C term = z;
  C sum = z;
  for (int n = 1; n < 60; ++n) {
    term *= -2.0 * z2 / double(2 * n + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

std::complex<double> faddeeva(std::complex<double> z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

std::complex<double> dawson(std::complex<double> z) {
  if (std::abs(z) <= 1.0) return dawson_series(z);
  if (z.imag() < 0.0) return -dawson(-z);
  const double c = std::sqrt(std::numbers::pi) / 2.0;
  if (z.imag() == 0.0) return c * faddeeva_upper(z).imag();
  return C(0.0, c) * (std::exp(-z * z) - faddeeva_upper(z));
}

double dawson(double x) { return dawson(std::complex<double>(x, 0.0)).real(); }

}  // namespace freespec
