#include "freespec/perturbation.hpp"

#include <cmath>

#include "freespec/closed_forms.hpp"
#include "freespec/error.hpp"

namespace freespec {

namespace {

// (-1 + sqrt(1 + 4 a^2 G^2)) / G = 4 a^2 G / (1 + r); r is the root closest to
// the small-alpha series 1 + 2 a^2 G^2, so the correction vanishes as alpha -> 0.
Complex arcsine_x(double alpha, Complex g) {
  if (std::abs(g) < 1e-300) fail(Errc::ZeroCauchy, "G vanishes in the arcsine perturbation");
  const Complex q = 4.0 * alpha * alpha * g * g;
  Complex r = std::sqrt(1.0 + q);
  const Complex series = 1.0 + 0.5 * q;
  if (std::abs(-r - series) < std::abs(r - series)) r = -r;
  return q / (g * (1.0 + r));
}

void check_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0, Errc::InvalidArgument, "alpha must be >= 0");
}

}  // namespace

void PerturbationSpec::validate() const {
  check_alpha(alpha);
  if (kind == PerturbationKind::Semicircle && (order < 0 || order > 2))
    fail(Errc::UnsupportedOrder, "semicircle perturbation supports orders 0, 1, 2");
  if (kind == PerturbationKind::Arcsine && (order < 0 || order > 3))
    fail(Errc::UnsupportedOrder, "arcsine perturbation series supports n_max 1, 2, 3");
}

Complex g_pert_semicircle(const Measure& base, double alpha, int order, Complex z) {
  check_alpha(alpha);
  if (order < 0 || order > 2) fail(Errc::UnsupportedOrder, "semicircle perturbation supports orders 0, 1, 2");
  const auto j = cauchy_jet<2>(base, z);
  const Complex g = j.value();
  if (order == 0) return g;
  const double a2 = alpha * alpha;
  const Complex g1 = g - a2 * g * j.derivative(1);
  if (order == 1) return g1;
  return g1 + 0.5 * a2 * a2 * g1 * g1 * j.derivative(2);
}

Complex g_pert_arcsine_first(const Measure& base, double alpha, Complex z) {
  check_alpha(alpha);
  const auto j = cauchy_jet<1>(base, z);
  return j.value() - arcsine_x(alpha, j.value()) * j.derivative(1);
}

Complex g_pert_arcsine_series(const Measure& base, double alpha, int n_max, Complex z) {
  check_alpha(alpha);
  if (n_max < 0 || n_max > 3) fail(Errc::UnsupportedOrder, "arcsine perturbation series supports n_max 1, 2, 3");
  const auto j = cauchy_jet<3>(base, z);
  Complex g = j.value();
  for (int k = 1; k <= n_max; ++k) {
    const Complex x = arcsine_x(alpha, g);
    Complex next = j.value();
    Complex xn = 1.0;
    double sign = 1.0, fact = 1.0;
    for (int n = 1; n <= k; ++n) {
      xn *= x;
      sign = -sign;
      fact *= n;
      next += sign / fact * j.derivative(n) * xn;
    }
    g = next;
  }
  return g;
}

Complex anderson_high_j_cauchy(double alpha, int order, Complex z) {
  check_alpha(alpha);
  if (order < 1 || order > 2) fail(Errc::UnsupportedOrder, "high-J closed forms exist for orders 1 and 2");
  require_upper(z);
  const Complex s = closed::edge_root(z, 2.0);
  const Complex s2 = s * s;
  const double a2 = alpha * alpha;
  const Complex g1 = (1.0 + a2 * z / (s2 * s)) / s;
  if (order == 1) return g1;
  return g1 + 0.5 * a2 * a2 * g1 * g1 * 2.0 * (2.0 + z * z) / (s2 * s2 * s);
}

RpCauchy rp_cauchy(double sigma, double gamma, int n, int order, Complex z) {
  require(n >= 2, Errc::InvalidArgument, "N must be >= 2");
  require(std::isfinite(gamma) && gamma >= 0.0, Errc::InvalidArgument, "gamma must be >= 0");
  const double alpha = std::pow(double(n), -0.5 * gamma);
  return {g_pert_semicircle(Measure::gaussian(sigma), alpha, order, z), gamma <= 1.0};
}

Complex perturbed_cauchy(const PerturbationSpec& spec, Complex z) {
  spec.validate();
  if (spec.kind == PerturbationKind::Semicircle) return g_pert_semicircle(spec.base, spec.alpha, spec.order, z);
  return g_pert_arcsine_series(spec.base, spec.alpha, spec.order, z);
}

namespace {

// Square-root (or inverse square-root) edges of the base, mapped through affine layers.
std::vector<double> singular_edges(const Measure& m) {
  return std::visit(
      [&](const auto& k) -> std::vector<double> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Gaussian> || std::is_same_v<K, Dirac> || std::is_same_v<K, Bernoulli>) {
          return {};
        } else if constexpr (std::is_same_v<K, Affine>) {
          auto e = singular_edges(*k.base);
          for (auto& x : e) x = k.scale * x + k.shift;
          return e;
        } else if constexpr (std::is_same_v<K, OrthoPoly>) {
          const double r = 2.0 * std::sqrt(k.b);
          return {k.a - r, k.a + r};
        } else {
          const Interval s = m.support();
          return {s.lo, s.hi};
        }
      },
      m.kind());
}

}  // namespace

DensityCurve perturbed_density(const PerturbationSpec& spec, std::span<const double> grid, double eps,
                               double edge_delta) {
  spec.validate();
  auto curve = stieltjes_invert([&](Complex z) { return perturbed_cauchy(spec, z); }, grid, eps);
  const auto edges = singular_edges(spec.base);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (double e : edges)
      if (std::abs(grid[i] - e) <= edge_delta) curve.valid[i] = 0;
  return curve;
}

DensityCurve rescale_curve(const DensityCurve& c, double scale, double shift, std::span<const double> grid) {
  require(scale != 0.0, Errc::InvalidArgument, "scale must be nonzero");
  require(c.size() >= 2, Errc::EmptyInput, "curve needs at least two points");
  std::vector<double> v(grid.size(), 0.0);
  std::vector<std::uint8_t> ok(grid.size(), 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = (grid[i] - shift) / scale;
    if (x < c.grid.front() || x > c.grid.back()) continue;
    auto it = std::upper_bound(c.grid.begin(), c.grid.end(), x);
    std::size_t k = std::min<std::size_t>(std::size_t(it - c.grid.begin()), c.size() - 1);
    const std::size_t j = k - 1;
    const double t = (x - c.grid[j]) / (c.grid[k] - c.grid[j]);
    v[i] = ((1.0 - t) * c.values[j] + t * c.values[k]) / std::abs(scale);
    ok[i] = c.valid[j] && c.valid[k];
  }
  DensityCurve out({grid.begin(), grid.end()}, std::move(v));
  for (std::size_t i = 0; i < grid.size(); ++i) out.valid[i] = out.valid[i] && ok[i];
  return out;
}

}  // namespace freespec
