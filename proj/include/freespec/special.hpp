#pragma once

#include <complex>

namespace freespec {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), valid on the whole plane.
std::complex<double> faddeeva(std::complex<double> z);

/// Dawson function D(z) = exp(-z^2) * int_0^z exp(t^2) dt.
std::complex<double> dawson(std::complex<double> z);
double dawson(double x);

}  // namespace freespec
