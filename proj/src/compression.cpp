#include "freespec/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "freespec/closed_forms.hpp"
#include "freespec/error.hpp"
#include "freespec/parallel.hpp"

namespace freespec {

namespace {

void require_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, Errc::InvalidArgument, "alpha must be > 0");
}

bool finite(Complex x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

}  // namespace

void CompressionSpec::validate() const { require_alpha(alpha); }

Complex compress_r(const Measure& m, double alpha, Complex w) {
  require_alpha(alpha);
  return r_transform(m, alpha * w);
}

CompressionResult compress_solve(const CauchyFn& g, double alpha, Complex z, const FixedPointConfig& cfg,
                                 std::optional<Complex> start) {
  cfg.validate();
  require_alpha(alpha);
  require_upper(z);
  CompressionResult r;
  if (alpha == 1.0) {
    r.g = g(z);
    r.w = z;
    return r;
  }
  const double c = 1.0 - alpha;
  const double floor_im = c > 0.0 ? z.imag() : cfg.min_im;
  bool last_clamped = false;
  auto clamp = [&](Complex x) {
    last_clamped = x.imag() < cfg.min_im;
    if (last_clamped) {
      ++r.clamps;
      return Complex(x.real(), cfg.min_im);
    }
    return x;
  };
  auto F = [&](Complex w) {
    const Complex gw = g(w);
    if (std::abs(gw) < 1e-300) fail(Errc::ZeroCauchy, "G vanishes inside the compression map");
    return z + c / gw;
  };
  auto scaled = [](Complex d, Complex w) { return std::abs(d) / std::max(1.0, std::abs(w)); };

  Complex w;
  if (start) {
    w = clamp(*start);
  } else {
    const Complex g0 = g(z);
    if (std::abs(g0) < 1e-300) fail(Errc::ZeroCauchy, "G vanishes at the seed");
    // G_alpha = g(z) / alpha  =>  w = z + theta alpha / g(z).
    w = clamp(z + c / g0);
  }
  double res = std::numeric_limits<double>::infinity();
  double prev = res;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Complex f = F(w);
    res = scaled(f - w, w);
    if (r.clamps > cfg.max_clamps) fail(Errc::LeftUpperHalfPlane, "compression argument clamp budget exhausted");
    if (res <= cfg.tol) {
      if (last_clamped) fail(Errc::LeftUpperHalfPlane, "compression fixed point sits below min_im");
      r.w = w;
      r.g = g(w) / alpha;
      r.iterations = it;
      r.residual = res;
      return r;
    }
    if (it > 3 && res > 0.5 * prev) {
      const Complex dw = 1e-7 * std::max(1.0, std::abs(w));
      const Complex slope = (F(w + dw) - f) / dw;
      const Complex wn = w - (f - w) / (slope - 1.0);
      if (finite(wn) && wn.imag() >= floor_im) {
        const Complex fn = F(wn);
        if (finite(fn) && scaled(fn - wn, wn) < res) {
          prev = res;
          w = wn;
          last_clamped = false;
          continue;
        }
      }
    }
    prev = res;
    w = clamp((1.0 - cfg.damping) * w + cfg.damping * f);
  }
  throw NoConvergenceError(cfg.max_iter, res, "compression");
}

Complex compress_cauchy_fp(const CauchyFn& g, double alpha, Complex z, const FixedPointConfig& cfg) {
  return compress_solve(g, alpha, z, cfg).g;
}

CauchyFn compressed(CauchyFn g, double alpha, FixedPointConfig cfg) {
  cfg.validate();
  require_alpha(alpha);
  return [g = std::move(g), alpha, cfg](Complex z) { return compress_solve(g, alpha, z, cfg).g; };
}

Complex compress_km_closed(double eta, double alpha, Complex z) {
  require(eta >= 2.0, Errc::InvalidArgument, "eta must be >= 2");
  require(alpha > 0.0 && alpha < eta, Errc::InvalidArgument, "alpha must be in (0, eta)");
  require_upper(z);
  return closed::kesten_mckay_compressed(eta, alpha, z);
}

double compress_km_density(double eta, double alpha, double lambda) {
  require(eta >= 2.0, Errc::InvalidArgument, "eta must be >= 2");
  require(alpha > 0.0 && alpha < eta, Errc::InvalidArgument, "alpha must be in (0, eta)");
  const double rad = 4.0 * alpha * (eta - alpha) - lambda * lambda;
  if (rad <= 0.0) return 0.0;
  return eta * std::sqrt(rad) / (2.0 * std::numbers::pi * alpha * (eta * eta - lambda * lambda));
}

Complex compress_bernoulli_closed(double alpha, Complex z) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::InvalidArgument, "alpha must be in (0, 1]");
  require_upper(z);
  return closed::bernoulli_compressed(alpha, z);
}

Complex compress_orthopoly_closed(double a, double b, double alpha, Complex z) {
  require(b > 0.0, Errc::InvalidArgument, "b must be > 0");
  require_alpha(alpha);
  require_upper(z);
  return closed::orthopoly(a * alpha, b * alpha, z);
}

Complex compress_first_order(Complex g, Complex dg, double theta) {
  require(theta >= 0.0, Errc::InvalidArgument, "theta must be >= 0");
  if (!(theta < 1.0)) fail(Errc::ThetaOutOfRange, "first-order compression needs theta < 1 (alpha > 1/2)");
  if (std::abs(g) < 1e-300) fail(Errc::ZeroCauchy, "G vanishes");
  return (theta + 1.0) * (g + theta * dg / g);
}

Complex compress_first_order(const Measure& m, double theta, Complex z) {
  const auto j = cauchy_jet<1>(m, z);
  return compress_first_order(j.value(), j.derivative(1), theta);
}

double pde_residual(const CauchyFamily& g, double u, Complex z, double h_u, double h_z) {
  if (z.imag() < 0.1) fail(Errc::StencilFailure, "stencil needs Im z >= 0.1");
  require(h_u > 0.0 && h_z > 0.0, Errc::InvalidArgument, "steps must be > 0");
  Complex s[5];
  try {
    s[0] = g(u, z);
    s[1] = g(u + h_u, z);
    s[2] = g(u - h_u, z);
    s[3] = g(u, z + h_z);
    s[4] = g(u, z - h_z);
  } catch (const Error& e) {
    fail(Errc::StencilFailure, std::string("stencil evaluation failed: ") + e.what());
  }
  for (const auto& v : s)
    if (!finite(v)) fail(Errc::StencilFailure, "non-finite value on the stencil");
  if (std::abs(s[0]) < 1e-300) fail(Errc::StencilFailure, "G vanishes at the stencil centre");
  const Complex du = (s[1] - s[2]) / (2.0 * h_u);
  const Complex dz = (s[3] - s[4]) / (2.0 * h_z);
  return std::abs(du + s[0] + dz / s[0]);
}

Complex compress_convolved(const Measure& a, const Measure& b, double delta, double alpha, Complex z,
                           const FixedPointConfig& cfg) {
  require(std::isfinite(delta), Errc::InvalidArgument, "delta must be finite");
  CauchyFn sum = delta == 0.0 ? cauchy_fn(a)
                              : free_convolution(cauchy_fn(a), cauchy_fn(Measure::affine(delta, 0.0, b)), cfg);
  return compress_cauchy_fp(sum, alpha, z, cfg);
}

SolvedCurve compress_density(const CauchyFn& g, double alpha, std::span<const double> grid, double eps,
                             const FixedPointConfig& cfg, int threads) {
  cfg.validate();
  require_alpha(alpha);
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
        const auto coarse = compress_solve(g, alpha, Complex(grid[i], eps), cfg, warm_coarse);
        const auto fine = compress_solve(g, alpha, Complex(grid[i], 0.5 * eps), cfg, warm_fine);
        warm_coarse = coarse.w;
        warm_fine = fine.w;
        const double rho = (-2.0 * fine.g.imag() + coarse.g.imag()) / std::numbers::pi;
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

}  // namespace freespec
