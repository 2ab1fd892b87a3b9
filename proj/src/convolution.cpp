#include "freespec/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "freespec/error.hpp"
#include "freespec/parallel.hpp"

namespace freespec {

namespace {

Complex h_of(const CauchyFn& g, Complex x) {
  const Complex gx = g(x);
  if (std::abs(gx) < 1e-300) fail(Errc::ZeroCauchy, "G vanishes inside the subordination map");
  return 1.0 / gx - x;
}

Complex clamp_upper(Complex x, double min_im, int& clamps) {
  if (x.imag() < min_im) {
    ++clamps;
    return {x.real(), min_im};
  }
  return x;
}

}  // namespace

void FixedPointConfig::validate() const {
  require(damping > 0.0 && damping <= 1.0, Errc::InvalidArgument, "damping must be in (0, 1]");
  require(tol > 0.0, Errc::InvalidArgument, "tol must be > 0");
  require(max_iter >= 1, Errc::InvalidArgument, "max_iter must be >= 1");
  require(min_im > 0.0, Errc::InvalidArgument, "min_im must be > 0");
  require(max_clamps >= 0, Errc::InvalidArgument, "max_clamps must be >= 0");
}

SubordinationResult subordination_solve(const CauchyFn& ga, const CauchyFn& gb, Complex z, const FixedPointConfig& cfg,
                                        std::optional<Complex> start) {
  cfg.validate();
  require_upper(z);
  SubordinationResult r;
  auto F = [&](Complex w) { return z + h_of(gb, clamp_upper(z + h_of(ga, w), cfg.min_im, r.clamps)); };
  auto scaled = [](Complex d, Complex w) { return std::abs(d) / std::max(1.0, std::abs(w)); };

  Complex w = start ? *start : z;
  if (w.imag() < z.imag()) w = {w.real(), z.imag()};
  double res = std::numeric_limits<double>::infinity();
  double prev = res;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Complex f = F(w);
    res = scaled(f - w, w);
    if (r.clamps > cfg.max_clamps) throw NoConvergenceError(it, res, "subordination clamp budget exhausted");
    if (res <= cfg.tol) {
      r.iterations = it;
      r.residual = res;
      r.omega_a = w;
      r.omega_b = clamp_upper(z + h_of(ga, w), cfg.min_im, r.clamps);
      r.g_c = ga(r.omega_a);
      r.consistency = std::abs(gb(r.omega_b) - r.g_c);
      // Steep G near atoms can amplify a converged omega into a visible gap
      // between the two routes; keep refining while that is the case.
      if (r.consistency <= 10.0 * cfg.tol || res <= 1e-15) return r;
    }
    // Near the real axis the fixed point can become almost neutral and the
    // damped map crawls; then try a Newton step on w - F(w). The subordination
    // fixed point is the only one with Im w >= Im z, so a step is kept only if
    // it stays there and lowers the residual.
    if (it > 3 && res > 0.5 * prev) {
      const Complex dw = 1e-7 * std::max(1.0, std::abs(w));
      const Complex slope = (F(w + dw) - f) / dw;
      const Complex wn = w - (f - w) / (slope - 1.0);
      if (std::isfinite(wn.real()) && std::isfinite(wn.imag()) && wn.imag() >= z.imag()) {
        const Complex fn = F(wn);
        if (scaled(fn - wn, wn) < res) {
          prev = res;
          w = wn;
          continue;
        }
      }
    }
    prev = res;
    w = clamp_upper((1.0 - cfg.damping) * w + cfg.damping * f, cfg.min_im, r.clamps);
  }
  throw NoConvergenceError(cfg.max_iter, res, "subordination");
}

SubordinationResult subordination_solve(const Measure& a, const Measure& b, Complex z, const FixedPointConfig& cfg) {
  return subordination_solve(cauchy_fn(a), cauchy_fn(b), z, cfg);
}

CauchyFn free_convolution(CauchyFn ga, CauchyFn gb, FixedPointConfig cfg) {
  cfg.validate();
  return [ga = std::move(ga), gb = std::move(gb), cfg](Complex z) { return subordination_solve(ga, gb, z, cfg).g_c; };
}

std::size_t SolvedCurve::failures() const {
  return static_cast<std::size_t>(std::count(converged.begin(), converged.end(), std::uint8_t{0}));
}

SolvedCurve free_convolve_density(const CauchyFn& ga, const CauchyFn& gb, std::span<const double> grid, double eps,
                                       const FixedPointConfig& cfg, int threads) {
  cfg.validate();
  require(eps > 0.0, Errc::InvalidArgument, "eps must be > 0");
  require(!grid.empty(), Errc::EmptyInput, "empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], Errc::InvalidArgument, "grid must be strictly increasing");

  const std::size_t n = grid.size();
  std::vector<double> values(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::uint8_t> ok(n, 0);
  std::vector<int> iters(n, 0);
  const std::size_t blocks = (n + kWarmStartBlock - 1) / kWarmStartBlock;

  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t lo = b * kWarmStartBlock, hi = std::min(n, lo + kWarmStartBlock);
    std::optional<Complex> warm_fine, warm_coarse;
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        const auto coarse = subordination_solve(ga, gb, Complex(grid[i], eps), cfg, warm_coarse);
        const auto fine = subordination_solve(ga, gb, Complex(grid[i], 0.5 * eps), cfg, warm_fine);
        warm_coarse = coarse.omega_a;
        warm_fine = fine.omega_a;
        const double rho = (-2.0 * fine.g_c.imag() + coarse.g_c.imag()) / std::numbers::pi;
        values[i] = std::max(rho, 0.0);
        ok[i] = 1;
        iters[i] = coarse.iterations + fine.iterations;
      } catch (const NoConvergenceError& e) {
        iters[i] = e.iterations();
        warm_coarse.reset();
        warm_fine.reset();
      } catch (const Error&) {
        warm_coarse.reset();
        warm_fine.reset();
      }
    }
  });

  SolvedCurve out;
  out.curve = DensityCurve({grid.begin(), grid.end()}, std::move(values));
  out.converged = std::move(ok);
  out.iterations = std::move(iters);
  return out;
}

SolvedCurve free_convolve_density(const Measure& a, const Measure& b, std::span<const double> grid, double eps,
                                       const FixedPointConfig& cfg, int threads) {
  return free_convolve_density(cauchy_fn(a), cauchy_fn(b), grid, eps, cfg, threads);
}

double uniform_step(std::span<const double> grid, double rel_tol) {
  require(grid.size() >= 2, Errc::GridMismatch, "grid needs at least two points");
  const double h = (grid.back() - grid.front()) / double(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - grid[i - 1] - h) > rel_tol * h)
      fail(Errc::GridMismatch, "grid is not uniform");
  return h;
}

DensityCurve classical_convolve_density(const DensityCurve& a, const DensityCurve& b, std::span<const double> grid) {
  const double ha = uniform_step(a.grid), hb = uniform_step(b.grid), hg = uniform_step(grid);
  const double h = ha;
  if (std::abs(hb - h) > 1e-9 * h || std::abs(hg - h) > 1e-9 * h)
    fail(Errc::GridMismatch, "curves and output grid must share one step");
  // Output nodes must sit on the lattice a.grid[0] + b.grid[0] + k h.
  const double origin = a.grid.front() + b.grid.front();
  const double shift = (grid.front() - origin) / h;
  if (std::abs(shift - std::round(shift)) > 1e-6) fail(Errc::GridMismatch, "output grid is not aligned with the inputs");

  auto support_of = [](const DensityCurve& c) {
    std::size_t lo = c.size(), hi = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c.valid[i] && c.values[i] > 0.0) {
        lo = std::min(lo, i);
        hi = i;
      }
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = support_of(a);
  const auto [blo, bhi] = support_of(b);
  require(alo <= ahi && blo <= bhi, Errc::EmptyInput, "curve carries no mass");
  const double need_lo = a.grid[alo] + b.grid[blo], need_hi = a.grid[ahi] + b.grid[bhi];
  if (grid.front() > need_lo + 1e-9 * h || grid.back() < need_hi - 1e-9 * h)
    fail(Errc::GridMismatch, "output grid does not cover the Minkowski sum of the supports");

  const long offset = std::lround(shift);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // lambda_k = origin + (offset + k) h, so the partner index is offset + k - i.
    double s = 0.0;
    for (std::size_t i = alo; i <= ahi; ++i) {
      const long j = offset + long(k) - long(i);
      if (j < long(blo) || j > long(bhi)) continue;
      if (!a.valid[i] || !b.valid[std::size_t(j)]) continue;
      s += a.values[i] * b.values[std::size_t(j)];
    }
    out[k] = s * h;
  }
  DensityCurve c({grid.begin(), grid.end()}, std::move(out));
  const double m = c.mass();
  require(m > 0.0, Errc::EmptyInput, "convolution carries no mass");
  for (auto& v : c.values) v /= m;
  return c;
}

Interval predicted_support(const Measure& a, const Measure& b) {
  const Interval sa = a.support(), sb = b.support();
  return {sa.lo + sb.lo, sa.hi + sb.hi};
}

}  // namespace freespec
