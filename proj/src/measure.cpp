#include "freespec/measure.hpp"

#include <cmath>

#include "freespec/error.hpp"

namespace freespec {

namespace {

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

Measure Measure::semicircle(double variance) {
  require(finite(variance) && variance > 0.0, Errc::InvalidArgument, "semicircle variance must be > 0");
  return Measure(Semicircle{variance});
}

Measure Measure::arcsine() { return Measure(Arcsine{}); }

Measure Measure::kesten_mckay(double eta) {
  require(finite(eta) && eta >= 2.0, Errc::InvalidArgument, "kesten_mckay eta must be >= 2");
  return Measure(KestenMcKay{eta});
}

Measure Measure::bernoulli() { return Measure(Bernoulli{}); }

Measure Measure::gaussian(double sigma) {
  require(finite(sigma) && sigma > 0.0, Errc::InvalidArgument, "gaussian sigma must be > 0");
  return Measure(Gaussian{sigma});
}

Measure Measure::orthopoly(double a, double b) {
  require(finite(a) && finite(b) && b > 0.0, Errc::InvalidArgument, "orthopoly needs real a and b > 0");
  return Measure(OrthoPoly{a, b});
}

Measure Measure::dirac(double c) {
  require(finite(c), Errc::InvalidArgument, "dirac location must be finite");
  return Measure(Dirac{c});
}

Measure Measure::affine(double scale, double shift, const Measure& base) {
  require(finite(scale) && scale != 0.0 && finite(shift), Errc::InvalidArgument,
          "affine needs finite scale != 0 and finite shift");
  return Measure(Affine{scale, shift, std::make_shared<const Measure>(base)});
}

std::string Measure::name() const {
  return std::visit(Overload{
                        [](const Semicircle&) { return "semicircle"; },
                        [](const Arcsine&) { return "arcsine"; },
                        [](const KestenMcKay&) { return "kesten_mckay"; },
                        [](const Bernoulli&) { return "bernoulli"; },
                        [](const Gaussian&) { return "gaussian"; },
                        [](const OrthoPoly&) { return "orthopoly"; },
                        [](const Dirac&) { return "dirac"; },
                        [](const Affine&) { return "affine"; },
                    },
                    kind_);
}

Interval Measure::support() const {
  return std::visit(Overload{
                        [](const Semicircle& m) {
                          const double r = 2.0 * std::sqrt(m.variance);
                          return Interval{-r, r};
                        },
                        [](const Arcsine&) { return Interval{-2.0, 2.0}; },
                        [](const KestenMcKay& m) {
                          const double r = 2.0 * std::sqrt(m.eta - 1.0);
                          return Interval{-r, r};
                        },
                        [](const Bernoulli&) { return Interval{-1.0, 1.0}; },
                        [](const Gaussian& m) { return Interval{-12.0 * m.sigma, 12.0 * m.sigma}; },
                        [](const OrthoPoly& m) {
                          const double r = 2.0 * std::sqrt(m.b);
                          Interval s{m.a - r, m.a + r};
                          if (m.b < m.a * m.a) {
                            const double x = -m.b / m.a;
                            s.lo = std::min(s.lo, x);
                            s.hi = std::max(s.hi, x);
                          }
                          return s;
                        },
                        [](const Dirac& m) { return Interval{m.c, m.c}; },
                        [](const Affine& m) {
                          const Interval b = m.base->support();
                          const double u = m.scale * b.lo + m.shift;
                          const double v = m.scale * b.hi + m.shift;
                          return Interval{std::min(u, v), std::max(u, v)};
                        },
                    },
                    kind_);
}

std::vector<Atom> Measure::atoms() const {
  return std::visit(Overload{
                        [](const Bernoulli&) { return std::vector<Atom>{{-1.0, 0.5}, {1.0, 0.5}}; },
                        [](const Dirac& m) { return std::vector<Atom>{{m.c, 1.0}}; },
                        [](const OrthoPoly& m) {
                          if (m.b < m.a * m.a) return std::vector<Atom>{{-m.b / m.a, 1.0 - m.b / (m.a * m.a)}};
                          return std::vector<Atom>{};
                        },
                        [](const Affine& m) {
                          auto out = m.base->atoms();
                          for (auto& a : out) a.location = m.scale * a.location + m.shift;
                          return out;
                        },
                        [](const auto&) { return std::vector<Atom>{}; },
                    },
                    kind_);
}

double Measure::continuous_mass() const {
  double m = 1.0;
  for (const auto& a : atoms()) m -= a.mass;
  return m < 1e-15 ? 0.0 : m;
}

double Measure::mean() const {
  return std::visit(Overload{
                        [](const Dirac& m) { return m.c; },
                        [](const Affine& m) { return m.scale * m.base->mean() + m.shift; },
                        [](const auto&) { return 0.0; },
                    },
                    kind_);
}

double Measure::variance() const {
  return std::visit(Overload{
                        [](const Semicircle& m) { return m.variance; },
                        [](const Arcsine&) { return 2.0; },
                        [](const KestenMcKay& m) { return m.eta; },
                        [](const Bernoulli&) { return 1.0; },
                        [](const Gaussian& m) { return m.sigma * m.sigma; },
                        [](const OrthoPoly& m) { return m.b; },
                        [](const Dirac&) { return 0.0; },
                        [](const Affine& m) { return m.scale * m.scale * m.base->variance(); },
                    },
                    kind_);
}

}  // namespace freespec
