#include "freespec/quadrature.hpp"

#include <array>
#include <cmath>

namespace freespec {

namespace {

constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double value;
  double error;
};

Segment kronrod(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWk[7];
  double g = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXk[i];
    const double s = f(c - x) + f(c + x);
    k += kWk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  evals += 15;
  return {k * h, std::abs((k - g) * h)};
}

double recurse(const std::function<double(double)>& f, double a, double b, Segment whole, double tol,
               double floor, int depth, int& evals, double& err) {
  if (whole.error <= tol || depth <= 0) {
    err += whole.error;
    return whole.value;
  }
  const double m = 0.5 * (a + b);
  const Segment left = kronrod(f, a, m, evals);
  const Segment right = kronrod(f, m, b, evals);
  const double sub = std::max(0.5 * tol, floor);
  return recurse(f, a, m, left, sub, floor, depth - 1, evals, err) +
         recurse(f, m, b, right, sub, floor, depth - 1, evals, err);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           double rel_tol, int max_depth) {
  QuadratureResult r;
  if (a == b) return r;
  const Segment whole = kronrod(f, a, b, r.evaluations);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
  const double floor = std::max(abs_tol * 1e-3, 1e-15 * std::abs(whole.value));
  r.value = recurse(f, a, b, whole, tol, floor, max_depth, r.evaluations, r.error);
  return r;
}

}  // namespace freespec
