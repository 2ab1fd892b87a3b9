#pragma once

#include <functional>
#include <optional>
#include <span>

#include "freespec/convolution.hpp"
#include "freespec/measure.hpp"
#include "freespec/transforms.hpp"

namespace freespec {

/// alpha < 1 compresses (principal block of relative size alpha), alpha > 1 decompresses.
struct CompressionSpec {
  double alpha = 1.0;
  double theta() const { return (1.0 - alpha) / alpha; }
  void validate() const;
};

/// R of the compressed law: R(alpha w).
Complex compress_r(const Measure& m, double alpha, Complex w);

struct CompressionResult {
  Complex g;
  /// Argument z + theta / G_alpha(z) at which the original transform is evaluated.
  Complex w;
  int iterations = 0;
  double residual = 0.0;
  int clamps = 0;
};

/// Solves alpha G_alpha(z) = g(z + theta / G_alpha(z)). The iteration runs on
/// w = z + theta / G_alpha, i.e. w = z + (1 - alpha) / g(w), seeded from
/// G_alpha = g(z) / alpha; Im w is clamped at cfg.min_im.
CompressionResult compress_solve(const CauchyFn& g, double alpha, Complex z, const FixedPointConfig& cfg = {},
                                 std::optional<Complex> start = std::nullopt);
Complex compress_cauchy_fp(const CauchyFn& g, double alpha, Complex z, const FixedPointConfig& cfg = {});
CauchyFn compressed(CauchyFn g, double alpha, FixedPointConfig cfg = {});

Complex compress_km_closed(double eta, double alpha, Complex z);
double compress_km_density(double eta, double alpha, double lambda);
/// alpha in (0, 1]; atoms at +-1 of mass (2 alpha - 1) / (2 alpha) when alpha > 1/2.
Complex compress_bernoulli_closed(double alpha, Complex z);
/// Orthopoly law with a -> a alpha, b -> b alpha.
Complex compress_orthopoly_closed(double a, double b, double alpha, Complex z);

/// (theta + 1) (G + theta G' / G), theta in [0, 1).
Complex compress_first_order(Complex g, Complex dg, double theta);
Complex compress_first_order(const Measure& m, double theta, Complex z);

/// G as a function of (u, z) with alpha = e^u.
using CauchyFamily = std::function<Complex(double u, Complex z)>;

/// |d_u G + G + (1/G) d_z G| from central differences.
double pde_residual(const CauchyFamily& g, double u, Complex z, double h_u = 1e-5, double h_z = 1e-5);

/// Compression by alpha of A + delta B (A, B free).
Complex compress_convolved(const Measure& a, const Measure& b, double delta, double alpha, Complex z,
                           const FixedPointConfig& cfg = {});

/// Density of the compressed law from fixed-point solves at lambda + i eps and
/// lambda + i eps/2 (Richardson), warm-started within blocks of kWarmStartBlock.
SolvedCurve compress_density(const CauchyFn& g, double alpha, std::span<const double> grid, double eps,
                             const FixedPointConfig& cfg = {}, int threads = 1);

}  // namespace freespec
