#include "freespec/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "freespec/ensembles.hpp"
#include "freespec/error.hpp"
#include "freespec/parallel.hpp"

namespace freespec {

namespace {

struct Stats {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

Stats stats(const std::vector<double>& x) {
  const double n = double(x.size());
  Stats s;
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (x.size() < 2) return s;
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.stderr_mean = std::sqrt(ss / (n - 1.0) / n);
  return s;
}

double covariance(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / (n - 1.0);
}

Eigen::VectorXd as_vector(const Spectrum& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.eigenvalues().data(), Eigen::Index(s.n()));
}

// Moments of diag(a) + diag(b).
std::array<double, 4> diagonal_moments(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::ArrayXd c = (a + b).array();
  const double n = double(c.size());
  return {c.sum() / n, c.square().sum() / n, c.cube().sum() / n, c.square().square().sum() / n};
}

// Moments of diag(a) + R with R = Q^T diag(l) Q, expanded so the only cubic
// cost is forming R.
std::array<double, 4> rotated_moments(const Eigen::VectorXd& a, const Eigen::VectorXd& l, const Eigen::MatrixXd& q) {
  const double n = double(a.size());
  const Eigen::MatrixXd r = q.transpose() * l.asDiagonal() * q;
  const Eigen::ArrayXd aa = a.array();
  const Eigen::ArrayXd ll = l.array();
  // diag(Q^T diag(l^k) Q)_i = sum_j Q_ji^2 l_j^k
  const Eigen::MatrixXd q2 = q.array().square().matrix();
  const Eigen::ArrayXd d1 = (q2.transpose() * ll.matrix()).array();
  const Eigen::ArrayXd d2 = (q2.transpose() * ll.square().matrix()).array();
  const Eigen::ArrayXd d3 = (q2.transpose() * ll.cube().matrix()).array();
  // tr(A R A R) = sum_ij a_i a_j R_ij^2
  const double arar = (aa.matrix().transpose() * r.array().square().matrix() * aa.matrix())(0, 0);
  const double m1 = aa.sum() + ll.sum();
  const double m2 = aa.square().sum() + 2.0 * (aa * d1).sum() + ll.square().sum();
  const double m3 = aa.cube().sum() + 3.0 * (aa.square() * d1).sum() + 3.0 * (aa * d2).sum() + ll.cube().sum();
  const double m4 = aa.square().square().sum() + 4.0 * (aa.cube() * d1).sum() + 4.0 * (aa.square() * d2).sum() +
                    2.0 * arar + 4.0 * (aa * d3).sum() + ll.square().square().sum();
  return {m1 / n, m2 / n, m3 / n, m4 / n};
}

MomentReport report(const std::vector<std::array<double, 4>>& per) {
  MomentReport out;
  out.realizations = int(per.size());
  for (int k = 0; k < 4; ++k) {
    std::vector<double> x(per.size());
    for (std::size_t r = 0; r < per.size(); ++r) x[r] = per[r][std::size_t(k)];
    const auto s = stats(x);
    out.m[std::size_t(k)] = s.mean;
    out.stderr_m[std::size_t(k)] = s.stderr_mean;
  }
  out.stderr4 = out.stderr_m[3];
  return out;
}

Eigen::VectorXd shuffled(const Eigen::VectorXd& v, Rng& rng) {
  std::vector<double> x(v.data(), v.data() + v.size());
  for (std::size_t i = x.size(); i > 1; --i) std::swap(x[i - 1], x[std::size_t(rng() % i)]);
  return Eigen::Map<const Eigen::VectorXd>(x.data(), v.size());
}

}  // namespace

Eigen::MatrixXd haar_orthogonal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_orthogonal(n, rng);
}

MomentReport coupled_moments(const Spectrum& a, const Spectrum& b, CouplingKind coupling, std::uint64_t seed,
                             int realizations, int threads) {
  require(a.n() == b.n(), Errc::DimensionMismatch, "spectra must have equal length");
  require(a.n() >= 1, Errc::EmptyInput, "empty spectra");
  require(realizations >= 1, Errc::InvalidArgument, "realizations must be >= 1");
  const Eigen::VectorXd va = as_vector(a), vb = as_vector(b);
  if (coupling == CouplingKind::Native) return report({diagonal_moments(va, vb)});
  std::vector<std::array<double, 4>> per(static_cast<std::size_t>(realizations));
  parallel_for(per.size(), threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    if (coupling == CouplingKind::Permutation) per[r] = diagonal_moments(va, shuffled(vb, rng));
    else per[r] = rotated_moments(va, vb, haar_orthogonal(a.n(), rng));
  });
  return report(per);
}

MomentReport native_moments(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(), Errc::DimensionMismatch,
          "A and B must be square of equal size");
  require(a.rows() >= 1, Errc::EmptyInput, "empty matrices");
  const Eigen::MatrixXd c = a + b;
  const Eigen::MatrixXd c2 = c * c;
  const double n = double(c.rows());
  return report({{c.trace() / n, c2.trace() / n, (c2.array() * c.transpose().array()).sum() / n, c2.squaredNorm() / n}});
}

MatrixSampler matrix_model(const std::string& name) {
  if (name == "diag-normal" || name == "perm-diag-normal") {
    const bool perm = name == "perm-diag-normal";
    return [perm](std::size_t n, Rng& rng) {
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXd d(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
      if (perm) d = shuffled(d, rng);
      return Eigen::MatrixXd(d.asDiagonal());
    };
  }
  if (name == "goe") return [](std::size_t n, Rng& rng) { return sample_goe(n, rng); };
  if (name == "identity")
    return [](std::size_t n, Rng&) { return Eigen::MatrixXd::Identity(Eigen::Index(n), Eigen::Index(n)).eval(); };
  fail(Errc::InvalidArgument, "unknown matrix model '" + name + "' (expected diag-normal, perm-diag-normal, goe, identity)");
}

PEstimate p_parameter(const MatrixSampler& sa, const MatrixSampler& sb, std::size_t n, int realizations,
                      std::uint64_t seed, int threads) {
  require(realizations >= 10, Errc::InvalidArgument, "p estimation needs at least 10 realizations");
  require(n >= 2, Errc::InvalidArgument, "N must be >= 2");
  const auto R = std::size_t(realizations);
  std::vector<double> x(R), y(R), z(R), m4n(R), m4c(R), m4f(R);
  parallel_for(R, threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    const Eigen::MatrixXd a = sa(n, rng);
    const Eigen::MatrixXd b = sb(n, rng);
    require(a.rows() == Eigen::Index(n) && b.rows() == Eigen::Index(n), Errc::DimensionMismatch,
            "sampler returned the wrong size");
    const double dn = double(n);
    const Eigen::MatrixXd a2 = a * a, b2 = b * b, ab = a * b;
    x[r] = (a2.array() * b2.transpose().array()).sum() / dn;
    y[r] = (ab.array() * ab.transpose().array()).sum() / dn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(b, Eigen::EigenvaluesOnly);
    if (eb.info() != Eigen::Success) fail(Errc::NoConvergenceEig, "eigensolver failed on B");
    const Eigen::VectorXd lb = eb.eigenvalues();
    const Eigen::MatrixXd q = haar_orthogonal(n, rng);
    const Eigen::MatrixXd bf = q.transpose() * lb.asDiagonal() * q;
    const Eigen::MatrixXd abf = a * bf;
    z[r] = (abf.array() * abf.transpose().array()).sum() / dn;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a, Eigen::EigenvaluesOnly);
    if (ea.info() != Eigen::Success) fail(Errc::NoConvergenceEig, "eigensolver failed on A");
    const Eigen::VectorXd la = ea.eigenvalues();
    m4n[r] = native_moments(a, b).m[3];
    m4c[r] = diagonal_moments(la, shuffled(lb, rng))[3];
    m4f[r] = rotated_moments(la, lb, haar_orthogonal(n, rng))[3];
  });

  std::vector<double> num(R), den(R);
  for (std::size_t r = 0; r < R; ++r) {
    num[r] = x[r] - y[r];
    den[r] = x[r] - z[r];
  }
  const auto sn = stats(num), sd = stats(den);
  PEstimate out;
  out.realizations = realizations;
  out.numerator = sn.mean;
  out.denominator = sd.mean;
  out.stderr_denominator = sd.stderr_mean;
  out.m4_native = stats(m4n).mean;
  out.m4_classical = stats(m4c).mean;
  out.m4_free = stats(m4f).mean;
  const double scale = std::max(1.0, stats(x).mean);
  if (std::abs(sd.mean) <= 5.0 * sd.stderr_mean + 1e-12 * scale)
    fail(Errc::DenominatorNearZero, "free and classical fourth moments coincide; p is undefined");
  out.p = sn.mean / sd.mean;
  const double var = covariance(num, num) - 2.0 * out.p * covariance(num, den) + out.p * out.p * covariance(den, den);
  out.stderr_p = std::sqrt(std::max(var, 0.0) / double(R)) / std::abs(sd.mean);
  return out;
}

DensityCurve moment_matched_density(const DensityCurve& rho_c, const DensityCurve& rho_f, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::POutOfRange, "p must be in [0, 1]");
  require(rho_c.size() == rho_f.size(), Errc::GridMismatch, "curves must share a grid");
  for (std::size_t i = 0; i < rho_c.size(); ++i)
    if (std::abs(rho_c.grid[i] - rho_f.grid[i]) > 1e-12 * std::max(1.0, std::abs(rho_c.grid[i])))
      fail(Errc::GridMismatch, "curves must share a grid");
  std::vector<double> v(rho_c.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = p * rho_f.values[i] + (1.0 - p) * rho_c.values[i];
  DensityCurve out(rho_c.grid, std::move(v));
  for (std::size_t i = 0; i < v.size(); ++i) out.valid[i] = out.valid[i] && rho_c.valid[i] && rho_f.valid[i];
  return out;
}

}  // namespace freespec
