#pragma once

#include <functional>

namespace freespec {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-14,
                           double rel_tol = 1e-13, int max_depth = 50);

}  // namespace freespec
