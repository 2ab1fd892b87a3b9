#pragma once

#include <span>

#include "freespec/measure.hpp"
#include "freespec/transforms.hpp"

namespace freespec {

/// Law of the perturbation B in H = A + alpha B.
enum class PerturbationKind { Semicircle, Arcsine };

struct PerturbationSpec {
  Measure base = Measure::arcsine();
  PerturbationKind kind = PerturbationKind::Semicircle;
  double alpha = 0.0;
  /// Semicircle: 0, 1, 2. Arcsine: series truncation 1, 2, 3 (0 gives G_A).
  int order = 1;

  void validate() const;
};

/// G_A - alpha^2 G_A G_A' (order 1); order 2 adds (alpha^4/2) G1^2 G_A''.
Complex g_pert_semicircle(const Measure& base, double alpha, int order, Complex z);

/// G_A - X(G_A) G_A' with X(G) = (-1 + sqrt(1 + 4 alpha^2 G^2)) / G.
Complex g_pert_arcsine_first(const Measure& base, double alpha, Complex z);

/// sum_{n <= n_max} (-1)^n / n! * d^n G_A * X(G)^n, with G on the right taken
/// from the previous truncation order.
Complex g_pert_arcsine_series(const Measure& base, double alpha, int n_max, Complex z);

/// Arcsine base with a semicircle perturbation, alpha = 1/J, written out in closed form.
Complex anderson_high_j_cauchy(double alpha, int order, Complex z);

struct RpCauchy {
  Complex g;
  /// Set for gamma <= 1, where the expansion about the diagonal part breaks down.
  bool regime_warning = false;
};

/// Rosenzweig-Porter: Gaussian(sigma) diagonal plus N^(-gamma/2) GOE.
RpCauchy rp_cauchy(double sigma, double gamma, int n, int order, Complex z);

Complex perturbed_cauchy(const PerturbationSpec& spec, Complex z);

/// Stieltjes inversion of perturbed_cauchy. Points within edge_delta of a
/// square-root edge of the base are kept but flagged invalid.
DensityCurve perturbed_density(const PerturbationSpec& spec, std::span<const double> grid, double eps = 1e-6,
                               double edge_delta = 0.05);

/// (1/s) rho((lambda - t)/s): density of s X + t from a curve for X, evaluated on `grid`.
DensityCurve rescale_curve(const DensityCurve& c, double scale, double shift, std::span<const double> grid);

}  // namespace freespec
