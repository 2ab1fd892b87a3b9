#include <doctest.h>

#include <cmath>
#include <numbers>

#include "freespec/closed_forms.hpp"
#include "freespec/error.hpp"
#include "freespec/perturbation.hpp"

using namespace freespec;
using C = std::complex<double>;

namespace {

std::vector<Measure> bases() {
  return {Measure::arcsine(), Measure::semicircle(1.0), Measure::gaussian(1.0), Measure::kesten_mckay(3.0),
          Measure::orthopoly(0.5, 1.0)};
}

const std::vector<C> kLattice = {C(0.3, 0.5), C(-1.2, 0.8), C(2.5, 0.4), C(0.0, 2.0)};

double fitted_exponent(const std::function<double(double)>& err, double a0) {
  return std::log2(err(a0) / err(a0 / 2.0));
}

}  // namespace

TEST_CASE("zero perturbation returns the base transform") {
  for (const auto& m : bases())
    for (C z : kLattice) {
      const C g = cauchy(m, z);
      CHECK(g_pert_semicircle(m, 0.0, 2, z) == g);
      CHECK(g_pert_arcsine_first(m, 0.0, z) == g);
      CHECK(g_pert_arcsine_series(m, 0.0, 2, z) == g);
      CHECK(g_pert_semicircle(m, 0.7, 0, z) == g);
    }
}

TEST_CASE("gaussian base, semicircle perturbation, first order") {
  const C v = g_pert_semicircle(Measure::gaussian(1.0), 0.3, 1, C(0.5, 0.3));
  CHECK(std::abs(v - C(0.28087356406012127, -0.87227672914559214)) < 1e-13);
}

TEST_CASE("arcsine base reproduces the high-J closed forms") {
  for (C z : kLattice) {
    const C s = closed::edge_root(z, 2.0);
    const double a = 0.15;
    const C printed = (1.0 + a * a * z / (s * s * s)) / s;
    CHECK(std::abs(g_pert_semicircle(Measure::arcsine(), a, 1, z) - printed) < 1e-14);
    CHECK(std::abs(anderson_high_j_cauchy(a, 1, z) - printed) < 1e-14);
    CHECK(std::abs(anderson_high_j_cauchy(a, 2, z) - g_pert_semicircle(Measure::arcsine(), a, 2, z)) < 1e-13);
  }
  CHECK(std::abs(anderson_high_j_cauchy(0.0, 1, C(0, 1)) - C(0, -1 / std::sqrt(5.0))) < 1e-15);
  const C v = anderson_high_j_cauchy(0.1, 2, C(3.0, 0.001));
  CHECK(std::abs(v - C(0.44841735157655203, -0.00027082248197796714)) < 1e-13);
  CHECK_THROWS_AS(anderson_high_j_cauchy(0.1, 3, C(0, 1)), Error);
  CHECK_THROWS_AS(anderson_high_j_cauchy(0.1, 1, C(1, 0)), Error);
}

TEST_CASE("first-order high-J density is the arcsine law") {
  for (double a : {0.05, 0.1, 0.3}) {
    for (int i = 0; i <= 78; ++i) {
      const double x = -1.95 + 0.05 * i;
      const double rho = -anderson_high_j_cauchy(a, 1, C(x, 1e-9)).imag() / std::numbers::pi;
      CHECK(std::abs(rho - density(Measure::arcsine(), x)) <= 1e-6);
    }
  }
}

TEST_CASE("second-order high-J has no branch jump outside the support") {
  std::vector<C> v;
  for (int i = 0; i <= 400; ++i) v.push_back(anderson_high_j_cauchy(0.1, 2, C(2.02 + 0.0025 * i, 0.001)));
  for (std::size_t i = 1; i + 2 < v.size(); ++i) {
    CHECK(std::isfinite(v[i].real()));
    const double jump = std::abs(v[i + 1] - v[i]);
    const double local = std::max(std::abs(v[i] - v[i - 1]), std::abs(v[i + 2] - v[i + 1]));
    CHECK(jump <= 10.0 * local);
  }
}

TEST_CASE("arcsine first order against its alpha^2 expansion") {
  for (const auto& m : bases())
    for (C z : kLattice) {
      auto gap = [&](double a) {
        const auto j = cauchy_jet<1>(m, z);
        const C expansion = j.value() - 2.0 * a * a * j.value() * j.derivative(1);
        return std::abs(g_pert_arcsine_first(m, a, z) - expansion);
      };
      CHECK(gap(1e-3) < 1e-10);
      CHECK(fitted_exponent(gap, 2e-2) >= 3.9);
    }
}

TEST_CASE("arcsine perturbation of a semicircle base matches the low-J closed form") {
  const double a = 0.2;
  for (C z : {C(0, 1), C(0.5, 0.2), C(-1.5, 0.05)}) {
    const C s = closed::edge_root(z, 2.0);
    const C w = z - s;
    const C printed = (2.0 - z * z + z * s + 2.0 * std::sqrt(1.0 + a * a * w * w)) / (2.0 * s);
    CHECK(std::abs(g_pert_arcsine_first(Measure::semicircle(1.0), a, z) - printed) < 1e-14);
  }
}

TEST_CASE("series at n_max = 1 equals the first-order form") {
  for (const auto& m : bases())
    for (C z : kLattice) CHECK(std::abs(g_pert_arcsine_series(m, 0.3, 1, z) - g_pert_arcsine_first(m, 0.3, z)) < 1e-15);
}

TEST_CASE("series orders bootstrap from the previous order") {
  const auto m = Measure::gaussian(1.0);
  const C z(0.4, 0.3);
  const double a = 0.3;
  const auto j = cauchy_jet<2>(m, z);
  const C g1 = g_pert_arcsine_first(m, a, z);
  const C x = (-1.0 + std::sqrt(1.0 + 4.0 * a * a * g1 * g1)) / g1;
  const C g2 = j.value() - j.derivative(1) * x + 0.5 * j.derivative(2) * x * x;
  CHECK(std::abs(g_pert_arcsine_series(m, a, 2, z) - g2) < 1e-14);
  CHECK_THROWS_AS(g_pert_arcsine_series(m, a, 4, z), Error);
}

TEST_CASE("alpha -> 0 continuity exponents") {
  for (const auto& m : bases())
    for (C z : kLattice) {
      for (int order : {1, 2}) {
        auto e = [&](double a) { return std::abs(g_pert_semicircle(m, a, order, z) - cauchy(m, z)); };
        CHECK(fitted_exponent(e, 0.02) >= 1.95);
      }
      for (int n : {1, 2, 3}) {
        auto e = [&](double a) { return std::abs(g_pert_arcsine_series(m, a, n, z) - cauchy(m, z)); };
        CHECK(fitted_exponent(e, 0.02) >= 1.95);
      }
    }
}

TEST_CASE("second minus first semicircle order scales as alpha^4") {
  for (const auto& m : bases())
    for (C z : kLattice) {
      auto d = [&](double a) { return std::abs(g_pert_semicircle(m, a, 2, z) - g_pert_semicircle(m, a, 1, z)); };
      const double e1 = std::log2(d(0.05) / d(0.025)), e2 = std::log2(d(0.025) / d(0.0125));
      CHECK(e1 >= 3.9);
      CHECK(e2 >= 3.9);
    }
}

TEST_CASE("arcsine first order equals semicircle first order at sqrt(2) alpha") {
  for (const auto& m : bases())
    for (C z : kLattice) {
      auto d = [&](double a) {
        return std::abs(g_pert_arcsine_first(m, a, z) - g_pert_semicircle(m, std::sqrt(2.0) * a, 1, z));
      };
      CHECK(fitted_exponent(d, 0.02) >= 3.9);
    }
}

TEST_CASE("branch continuity across the base edges") {
  for (const auto& m : {Measure::arcsine(), Measure::semicircle(1.0)})
    for (double edge : {-2.0, 2.0}) {
      auto eval = [&](double x) { return g_pert_semicircle(m, 0.2, 2, C(x, 0.01)); };
      const double h = 1e-3;
      std::vector<C> v;
      for (int i = -100; i <= 100; ++i) v.push_back(eval(edge + h * i));
      for (std::size_t i = 1; i + 2 < v.size(); ++i) {
        const double jump = std::abs(v[i + 1] - v[i]);
        const double local = std::max(std::abs(v[i] - v[i - 1]), std::abs(v[i + 2] - v[i + 1]));
        CHECK(jump <= 10.0 * local);
      }
    }
}

TEST_CASE("rp transform") {
  const C z(0.01, 0.02);
  const auto far = rp_cauchy(0.1, 200.0, 1000, 2, z);
  CHECK(std::abs(far.g - cauchy(Measure::gaussian(0.1), z)) < 1e-14);
  CHECK_FALSE(far.regime_warning);
  CHECK(rp_cauchy(0.1, 1.0, 1000, 1, z).regime_warning);
  const double a = std::pow(1000.0, -0.75);
  CHECK(std::abs(rp_cauchy(0.1, 1.5, 1000, 2, z).g - g_pert_semicircle(Measure::gaussian(0.1), a, 2, z)) < 1e-15);
}

TEST_CASE("perturbation spec validation") {
  PerturbationSpec s;
  s.order = 3;
  CHECK_THROWS_AS(s.validate(), Error);
  s.kind = PerturbationKind::Arcsine;
  CHECK_NOTHROW(s.validate());
  s.alpha = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  try {
    g_pert_semicircle(Measure::arcsine(), 0.1, 3, C(0, 1));
    FAIL("expected UnsupportedOrder");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedOrder);
  }
}

TEST_CASE("perturbed density") {
  const auto grid = linspace(-2.5, 2.5, 101);
  PerturbationSpec s;
  s.base = Measure::semicircle(1.0);
  s.alpha = 0.0;
  s.order = 2;
  const auto c = perturbed_density(s, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (c.valid[i]) CHECK(std::abs(c.values[i] - density(s.base, grid[i])) < 1e-6);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool near_edge = std::abs(std::abs(grid[i]) - 2.0) <= 0.05;
    CHECK(c.valid[i] == (near_edge ? 0 : 1));
  }
  s.base = Measure::gaussian(1.0);
  s.kind = PerturbationKind::Arcsine;
  s.alpha = 0.2;
  s.order = 1;
  const auto g = perturbed_density(s, linspace(-6, 6, 601));
  CHECK(g.invalid_count() == 0);
  CHECK(std::abs(g.mass() - 1.0) < 1e-3);
}

TEST_CASE("rescaling a curve to unscaled units") {
  const auto grid = linspace(-2.0, 2.0, 401);
  std::vector<double> v;
  for (double x : grid) v.push_back(density(Measure::semicircle(1.0), x));
  const DensityCurve c(grid, v);
  const auto out = rescale_curve(c, 3.0, 0.0, linspace(-6.0, 6.0, 121));
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(std::abs(out.values[i] - density(Measure::semicircle(9.0), out.grid[i])) < 2e-3);
  CHECK(std::abs(out.mass() - 1.0) < 2e-3);
}
