#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "freespec/jet.hpp"
#include "freespec/measure.hpp"

namespace freespec {

/// z -> G(z) on the upper half-plane.
using CauchyFn = std::function<Complex(Complex)>;

/// Sorted eigenvalues of one matrix.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> eigenvalues);

  const std::vector<double>& eigenvalues() const { return ev_; }
  std::size_t n() const { return ev_.size(); }
  double operator[](std::size_t i) const { return ev_[i]; }
  double mean() const;

 private:
  std::vector<double> ev_;
};

/// Density sampled on a strictly increasing grid. valid = 0 marks points that
/// are not trustworthy: NaN where evaluation failed, the computed value where
/// a producer flags a known singularity.
struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  DensityCurve() = default;
  DensityCurve(std::vector<double> grid, std::vector<double> values);

  std::size_t size() const { return grid.size(); }
  /// Trapezoid integral over segments whose endpoints are both valid.
  double mass() const;
  /// Trapezoid integral of lambda^k * rho.
  double moment(int k) const;
  std::size_t invalid_count() const;
};

/// Uniform grid of n points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

double density(const Measure& m, double lambda);
Complex cauchy(const Measure& m, Complex z);
CauchyFn cauchy_fn(const Measure& m);

/// Taylor coefficients of G about z, orders 0..K (K <= 3 instantiated).
template <int K>
Jet<K> cauchy_jet(const Measure& m, Complex z);
extern template Jet<0> cauchy_jet<0>(const Measure&, Complex);
extern template Jet<1> cauchy_jet<1>(const Measure&, Complex);
extern template Jet<2> cauchy_jet<2>(const Measure&, Complex);
extern template Jet<3> cauchy_jet<3>(const Measure&, Complex);

/// n-th z-derivative of G, n <= 3.
Complex cauchy_derivative(const Measure& m, Complex z, int n);

Complex r_transform(const Measure& m, Complex w);
/// H(z) = 1/G(z) - z.
Complex h_transform(const Measure& m, Complex z);
/// Integral of lambda^k against m, k <= 40.
double moment(const Measure& m, int k);
/// Expectation of f under m (continuous part by quadrature plus atoms).
double expect(const Measure& m, const std::function<double(double)>& f);

Complex empirical_cauchy(const Spectrum& s, Complex z);

/// rho(lambda) = -Im g(lambda + i eps) / pi, clamped at 0. With extrapolate,
/// 2 rho_eps - rho_{2 eps} is taken before clamping.
DensityCurve stieltjes_invert(const CauchyFn& g, std::span<const double> grid, double eps, bool extrapolate = false);

void require_upper(Complex z);

}  // namespace freespec
