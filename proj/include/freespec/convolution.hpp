#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freespec/measure.hpp"
#include "freespec/transforms.hpp"

namespace freespec {

struct FixedPointConfig {
  double damping = 0.5;
  double tol = 1e-12;
  int max_iter = 10000;
  double min_im = 1e-8;
  /// Iterates pushed below min_im are clamped; more clamps than this fail.
  int max_clamps = 100;

  void validate() const;
};

struct SubordinationResult {
  Complex omega_a;
  Complex omega_b;
  Complex g_c;
  int iterations = 0;
  double residual = 0.0;
  int clamps = 0;
  /// |G_B(omega_b) - G_A(omega_a)|
  double consistency = 0.0;
};

/// Solves omega = z + H_B(z + H_A(omega)) by damped iteration from `start`
/// (default z). G_C(z) = G_A(omega_A) = G_B(omega_B).
SubordinationResult subordination_solve(const CauchyFn& ga, const CauchyFn& gb, Complex z, const FixedPointConfig& cfg,
                                        std::optional<Complex> start = std::nullopt);
SubordinationResult subordination_solve(const Measure& a, const Measure& b, Complex z, const FixedPointConfig& cfg = {});

/// Cauchy transform of the free additive convolution, usable as an input to
/// further convolutions.
CauchyFn free_convolution(CauchyFn ga, CauchyFn gb, FixedPointConfig cfg = {});

/// Curve produced by a per-point fixed-point solve.
struct SolvedCurve {
  DensityCurve curve;
  std::vector<std::uint8_t> converged;
  std::vector<int> iterations;
  std::size_t failures() const;
};

/// Grid points per warm-start chain. Chains restart from omega = z at block
/// boundaries, so results do not depend on the worker count.
inline constexpr std::size_t kWarmStartBlock = 64;

/// Density of A + B (A, B free) on the grid from solves at lambda + i eps and
/// lambda + i eps/2 combined by Richardson extrapolation.
SolvedCurve free_convolve_density(const CauchyFn& ga, const CauchyFn& gb, std::span<const double> grid, double eps,
                                       const FixedPointConfig& cfg = {}, int threads = 1);
SolvedCurve free_convolve_density(const Measure& a, const Measure& b, std::span<const double> grid, double eps,
                                       const FixedPointConfig& cfg = {}, int threads = 1);

/// Density of A + B for commuting A, B on a uniform grid sharing the inputs' step.
DensityCurve classical_convolve_density(const DensityCurve& a, const DensityCurve& b, std::span<const double> grid);

/// Interval containing the support of the free convolution (Minkowski sum).
Interval predicted_support(const Measure& a, const Measure& b);

/// Uniform-spacing check used by the grid-based operations; returns the step.
double uniform_step(std::span<const double> grid, double rel_tol = 1e-6);

}  // namespace freespec
