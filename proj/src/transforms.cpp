#include "freespec/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "freespec/closed_forms.hpp"
#include "freespec/error.hpp"
#include "freespec/quadrature.hpp"
#include "freespec/special.hpp"

namespace freespec {

namespace {

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

constexpr double kPi = std::numbers::pi;

double sqrt_edge_density(double lambda, double center, double radius) {
  const double d = radius * radius - (lambda - center) * (lambda - center);
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

template <int K>
Jet<K> gaussian_jet(double sigma, Complex z) {
  const double s2 = sigma * sigma;
  std::array<Complex, K + 2> d{};
  d[0] = Complex(0.0, -std::sqrt(kPi / 2.0) / sigma) * faddeeva(z / (std::sqrt(2.0) * sigma));
  if constexpr (K >= 1) d[1] = (1.0 - z * d[0]) / s2;
  for (int n = 1; n < K; ++n) d[n + 1] = (-double(n) * d[n - 1] - z * d[n]) / s2;
  Jet<K> j;
  double fact = 1.0;
  for (int n = 0; n <= K; ++n) {
    if (n > 0) fact *= n;
    j.c[n] = d[n] / fact;
  }
  return j;
}

template <int K>
Jet<K> jet_any(const Measure& m, Complex z) {
  using J = Jet<K>;
  const J x = J::variable(z);
  return std::visit(Overload{
                        [&](const Semicircle& p) { return closed::semicircle(p.variance, x); },
                        [&](const Arcsine&) { return closed::arcsine(x); },
                        [&](const KestenMcKay& p) { return closed::kesten_mckay(p.eta, x); },
                        [&](const Bernoulli&) { return closed::bernoulli(x); },
                        [&](const Gaussian& p) { return gaussian_jet<K>(p.sigma, z); },
                        [&](const OrthoPoly& p) { return closed::orthopoly(p.a, p.b, x); },
                        [&](const Dirac& p) { return closed::dirac(p.c, x); },
                        [&](const Affine& p) {
                          const Complex w = (z - p.shift) / p.scale;
                          J b = p.scale > 0 ? jet_any<K>(*p.base, w) : conj(jet_any<K>(*p.base, std::conj(w)));
                          Complex f = 1.0 / p.scale;
                          for (int k = 0; k <= K; ++k) {
                            b.c[k] *= f;
                            f /= p.scale;
                          }
                          return b;
                        },
                    },
                    m.kind());
}

double continuous_density(const Measure& m, double lambda) {
  return std::visit(
      Overload{
          [&](const Semicircle& p) {
            return sqrt_edge_density(lambda, 0.0, 2.0 * std::sqrt(p.variance)) / (2.0 * kPi * p.variance);
          },
          [&](const Arcsine&) {
            const double d = 4.0 - lambda * lambda;
            return d > 0.0 ? 1.0 / (kPi * std::sqrt(d)) : 0.0;
          },
          [&](const KestenMcKay& p) {
            const double r = 2.0 * std::sqrt(p.eta - 1.0);
            if (std::abs(lambda) >= r) return 0.0;
            return p.eta * sqrt_edge_density(lambda, 0.0, r) / (2.0 * kPi * (p.eta * p.eta - lambda * lambda));
          },
          [&](const Gaussian& p) {
            const double u = lambda / p.sigma;
            return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * kPi) * p.sigma);
          },
          [&](const OrthoPoly& p) {
            const double v = sqrt_edge_density(lambda, p.a, 2.0 * std::sqrt(p.b));
            return v > 0.0 ? v / (2.0 * kPi * (p.b + p.a * lambda)) : 0.0;
          },
          [&](const Affine& p) {
            return continuous_density(*p.base, (lambda - p.shift) / p.scale) / std::abs(p.scale);
          },
          [&](const auto&) { return 0.0; },
      },
      m.kind());
}

// Integral of f * rho over the continuous part. Square-root-edged supports use
// lambda = c + r sin(t), where sqrt(r^2 - (lambda - c)^2) = r cos(t) exactly, so
// the weight w(t) = rho(lambda) d(lambda)/dt is free of edge cancellation.
double continuous_expect(const Measure& m, const std::function<double(double)>& f) {
  auto on_interval = [&](double center, double radius, auto weight) {
    auto g = [&](double t) {
      const double lam = center + radius * std::sin(t);
      const double rc = radius * std::cos(t);
      return f(lam) * weight(lam, rc);
    };
    return integrate(g, -kPi / 2.0, kPi / 2.0, 1e-15, 1e-14).value;
  };
  return std::visit(
      Overload{
          [&](const Semicircle& p) {
            return on_interval(0.0, 2.0 * std::sqrt(p.variance),
                               [&](double, double rc) { return rc * rc / (2.0 * kPi * p.variance); });
          },
          [&](const Arcsine&) { return on_interval(0.0, 2.0, [](double, double) { return 1.0 / kPi; }); },
          [&](const KestenMcKay& p) {
            if (p.eta == 2.0) return on_interval(0.0, 2.0, [](double, double) { return 1.0 / kPi; });
            return on_interval(0.0, 2.0 * std::sqrt(p.eta - 1.0), [&](double lam, double rc) {
              return p.eta * rc * rc / (2.0 * kPi * (p.eta * p.eta - lam * lam));
            });
          },
          [&](const OrthoPoly& p) {
            return on_interval(p.a, 2.0 * std::sqrt(p.b),
                               [&](double lam, double rc) { return rc * rc / (2.0 * kPi * (p.b + p.a * lam)); });
          },
          [&](const Gaussian& p) {
            auto g = [&](double x) { return f(x) * continuous_density(m, x); };
            const double L = 12.0 * p.sigma;
            return integrate(g, -L, 0.0, 1e-15, 1e-14).value + integrate(g, 0.0, L, 1e-15, 1e-14).value;
          },
          [&](const Affine& p) {
            return continuous_expect(*p.base, [&](double x) { return f(p.scale * x + p.shift); });
          },
          [&](const auto&) { return 0.0; },
      },
      m.kind());
}

}  // namespace

Spectrum::Spectrum(std::vector<double> eigenvalues) : ev_(std::move(eigenvalues)) {
  std::sort(ev_.begin(), ev_.end());
}

double Spectrum::mean() const {
  double s = 0.0;
  for (double x : ev_) s += x;
  return ev_.empty() ? 0.0 : s / double(ev_.size());
}

DensityCurve::DensityCurve(std::vector<double> g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require(grid.size() == values.size(), Errc::GridMismatch, "grid and values differ in length");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], Errc::InvalidArgument, "grid must be strictly increasing");
  valid.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) valid[i] = std::isfinite(values[i]) ? 1 : 0;
}

double DensityCurve::mass() const { return moment(0); }

double DensityCurve::moment(int k) const {
  double s = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!valid[i] || !valid[i - 1]) continue;
    const double a = values[i - 1] * std::pow(grid[i - 1], k);
    const double b = values[i] * std::pow(grid[i], k);
    s += 0.5 * (a + b) * (grid[i] - grid[i - 1]);
  }
  return s;
}

std::size_t DensityCurve::invalid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  require(n >= 2, Errc::InvalidArgument, "grid needs at least two points");
  require(hi > lo, Errc::InvalidArgument, "grid needs hi > lo");
  std::vector<double> g(n);
  const double h = (hi - lo) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * double(i);
  g.back() = hi;
  return g;
}

void require_upper(Complex z) {
  if (!(z.imag() > 0.0)) fail(Errc::LowerHalfPlane, "Cauchy transform argument needs Im z > 0");
}

double density(const Measure& m, double lambda) {
  if (m.purely_atomic()) fail(Errc::AtomicMeasure, m.name() + " has no density");
  return continuous_density(m, lambda);
}

template <int K>
Jet<K> cauchy_jet(const Measure& m, Complex z) {
  require_upper(z);
  return jet_any<K>(m, z);
}
template Jet<0> cauchy_jet<0>(const Measure&, Complex);
template Jet<1> cauchy_jet<1>(const Measure&, Complex);
template Jet<2> cauchy_jet<2>(const Measure&, Complex);
template Jet<3> cauchy_jet<3>(const Measure&, Complex);

Complex cauchy(const Measure& m, Complex z) { return cauchy_jet<0>(m, z).value(); }

CauchyFn cauchy_fn(const Measure& m) {
  return [m](Complex z) { return cauchy(m, z); };
}

Complex cauchy_derivative(const Measure& m, Complex z, int n) {
  switch (n) {
    case 0: return cauchy(m, z);
    case 1: return cauchy_jet<1>(m, z).derivative(1);
    case 2: return cauchy_jet<2>(m, z).derivative(2);
    case 3: return cauchy_jet<3>(m, z).derivative(3);
    default: fail(Errc::DerivativeUnavailable, "derivatives of G are available up to order 3");
  }
}

Complex r_transform(const Measure& m, Complex w) {
  // (-1 + sqrt(1 + 4w^2)) / w written without cancellation.
  auto arcsine_r = [](Complex v) { return 4.0 * v / (1.0 + std::sqrt(1.0 + 4.0 * v * v)); };
  return std::visit(Overload{
                        [&](const Semicircle& p) { return Complex(p.variance) * w; },
                        [&](const Arcsine&) { return arcsine_r(w); },
                        [&](const Bernoulli&) { return 0.5 * arcsine_r(w); },
                        [&](const KestenMcKay& p) -> Complex {
                          if (p.eta == 2.0) return arcsine_r(w);
                          fail(Errc::NoClosedForm, "kesten_mckay R-transform is only tabulated for eta = 2");
                        },
                        [&](const Gaussian&) -> Complex {
                          fail(Errc::NoClosedForm, "gaussian R-transform has no closed form");
                        },
                        [&](const OrthoPoly& p) {
                          const Complex d = 1.0 - p.a * w;
                          if (std::abs(d) < 1e-14) fail(Errc::PoleAt, "orthopoly R-transform pole at w = 1/a");
                          return p.b * w / d;
                        },
                        [&](const Dirac& p) { return Complex(p.c); },
                        [&](const Affine& p) { return p.scale * r_transform(*p.base, p.scale * w) + p.shift; },
                    },
                    m.kind());
}

Complex h_transform(const Measure& m, Complex z) {
  const Complex g = cauchy(m, z);
  if (std::abs(g) < 1e-300) fail(Errc::ZeroCauchy, "G vanishes");
  return 1.0 / g - z;
}

double expect(const Measure& m, const std::function<double(double)>& f) {
  double s = 0.0;
  if (m.continuous_mass() > 0.0) s += continuous_expect(m, f);
  for (const auto& a : m.atoms()) s += a.mass * f(a.location);
  return s;
}

double moment(const Measure& m, int k) {
  require(k >= 0 && k <= 40, Errc::InvalidArgument, "moment order must be in [0, 40]");
  if (k == 0) return 1.0;
  return expect(m, [k](double x) { return std::pow(x, k); });
}

Complex empirical_cauchy(const Spectrum& s, Complex z) {
  require_upper(z);
  require(s.n() > 0, Errc::EmptyInput, "empty spectrum");
  Complex acc = 0.0;
  for (double a : s.eigenvalues()) acc += 1.0 / (z - a);
  return acc / double(s.n());
}

DensityCurve stieltjes_invert(const CauchyFn& g, std::span<const double> grid, double eps, bool extrapolate) {
  require(eps > 0.0, Errc::InvalidArgument, "eps must be > 0");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      double v = -g(Complex(grid[i], eps)).imag() / kPi;
      if (extrapolate) v = 2.0 * v + g(Complex(grid[i], 2.0 * eps)).imag() / kPi;
      values[i] = std::max(v, 0.0);
    } catch (const Error&) {
      values[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return DensityCurve({grid.begin(), grid.end()}, std::move(values));
}

}  // namespace freespec
