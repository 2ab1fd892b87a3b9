#include "freespec/ensembles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>

#include "freespec/convolution.hpp"
#include "freespec/error.hpp"
#include "freespec/parallel.hpp"

namespace freespec {

namespace {

using SolverT = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>;

void check_solver(const SolverT& es) {
  if (es.info() != Eigen::Success) fail(Errc::NoConvergenceEig, "symmetric eigensolver did not converge");
}

Spectrum to_spectrum(const Eigen::VectorXd& v) { return Spectrum(std::vector<double>(v.data(), v.data() + v.size())); }

void check_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
  require(!diag.empty(), Errc::EmptyInput, "empty diagonal");
  require(offdiag.size() + 1 == diag.size(), Errc::DimensionMismatch, "offdiag must have length N - 1");
}

double uniform01(Rng& rng) { return (double(rng() >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

void HamiltonianSpec::validate() const {
  require(n >= 2, Errc::InvalidArgument, "N must be >= 2");
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, AndersonTridiag>) {
          require(m.J >= 0.0 && std::isfinite(m.J), Errc::InvalidArgument, "J must be >= 0");
          require(m.diag.param > 0.0 && std::isfinite(m.diag.param), Errc::InvalidArgument,
                  "diagonal distribution parameter must be > 0");
        } else if constexpr (std::is_same_v<M, RosenzweigPorter>) {
          require(m.gamma >= 0.0, Errc::InvalidArgument, "gamma must be >= 0");
          require(m.sigma_diag >= 0.0 && std::isfinite(m.sigma_diag), Errc::InvalidArgument, "sigma must be >= 0");
        } else if constexpr (std::is_same_v<M, TridiagChain>) {
          require(m.J >= 0.0 && std::isfinite(m.J), Errc::InvalidArgument, "J must be >= 0");
        }
      },
      model);
}

Eigen::MatrixXd Tridiagonal::dense() const {
  const auto n = Eigen::Index(diag.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = diag[std::size_t(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = offdiag[std::size_t(i)];
  return h;
}

std::size_t HamiltonianSample::n() const {
  if (const auto* t = std::get_if<Tridiagonal>(&storage)) return t->diag.size();
  return std::size_t(std::get<Eigen::MatrixXd>(storage).rows());
}

double HamiltonianSample::trace() const {
  if (const auto* t = std::get_if<Tridiagonal>(&storage)) return std::accumulate(t->diag.begin(), t->diag.end(), 0.0);
  return std::get<Eigen::MatrixXd>(storage).trace();
}

double HamiltonianSample::norm() const {
  if (const auto* t = std::get_if<Tridiagonal>(&storage)) {
    double s = 0.0;
    for (double d : t->diag) s += d * d;
    for (double o : t->offdiag) s += 2.0 * o * o;
    return std::sqrt(s);
  }
  return std::get<Eigen::MatrixXd>(storage).norm();
}

Eigen::MatrixXd HamiltonianSample::dense() const {
  if (const auto* t = std::get_if<Tridiagonal>(&storage)) return t->dense();
  return std::get<Eigen::MatrixXd>(storage);
}

double sample_semicircle(Rng& rng, double variance) {
  require(variance > 0.0, Errc::InvalidArgument, "variance must be > 0");
  // CDF in the angle x = R sin(phi): F = 1/2 + (2 phi + sin 2 phi) / (2 pi).
  const double target = 2.0 * std::numbers::pi * (uniform01(rng) - 0.5);
  double lo = -0.5 * std::numbers::pi, hi = 0.5 * std::numbers::pi;
  double phi = 0.25 * target;
  for (int it = 0; it < 200; ++it) {
    const double f = 2.0 * phi + std::sin(2.0 * phi) - target;
    if (f > 0.0) hi = phi;
    else lo = phi;
    const double df = 4.0 * std::cos(phi) * std::cos(phi);
    double next = df > 0.0 ? phi - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - phi);
    phi = next;
    if (step < 1e-12 || hi - lo < 1e-12) break;
  }
  return 2.0 * std::sqrt(variance) * std::sin(phi);
}

Eigen::MatrixXd sample_goe(std::size_t n, Rng& rng) {
  require(n >= 1, Errc::InvalidArgument, "N must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double off = 1.0 / std::sqrt(double(n)), diag = std::sqrt(2.0 / double(n));
  const auto N = Eigen::Index(n);
  Eigen::MatrixXd h(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    h(j, j) = diag * normal(rng);
    for (Eigen::Index i = j + 1; i < N; ++i) h(i, j) = h(j, i) = off * normal(rng);
  }
  return h;
}

namespace {

// Orthonormal columns, Haar distributed on the Stiefel manifold.
Eigen::MatrixXd haar_columns(std::size_t n, std::size_t k, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(k));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

Eigen::MatrixXd haar_orthogonal(std::size_t n, Rng& rng) {
  require(n >= 1, Errc::InvalidArgument, "N must be >= 1");
  return haar_columns(n, n, rng);
}

HamiltonianSample sample_hamiltonian(const HamiltonianSpec& spec, std::size_t index) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, index));
  const std::size_t n = spec.n;
  HamiltonianSample out;
  out.spec = spec;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, AndersonTridiag>) {
          Tridiagonal t{std::vector<double>(n), std::vector<double>(n - 1, m.J)};
          std::normal_distribution<double> normal(0.0, 1.0);
          for (auto& d : t.diag)
            d = m.diag.kind == DiagDist::Kind::Gaussian ? m.diag.param * normal(rng)
                                                        : sample_semicircle(rng, m.diag.param);
          out.storage = std::move(t);
        } else if constexpr (std::is_same_v<M, TridiagChain>) {
          out.storage = Tridiagonal{std::vector<double>(n, 0.0), std::vector<double>(n - 1, m.J)};
        } else if constexpr (std::is_same_v<M, Goe>) {
          out.storage = sample_goe(n, rng);
        } else {
          std::normal_distribution<double> normal(0.0, 1.0);
          Eigen::VectorXd a = Eigen::VectorXd::Zero(Eigen::Index(n));
          for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = m.sigma_diag * normal(rng);
          Eigen::MatrixXd h = std::pow(double(n), -0.5 * m.gamma) * sample_goe(n, rng);
          h.diagonal() += a;
          out.storage = std::move(h);
        }
      },
      spec.model);
  return out;
}

Spectrum eig_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
  check_tridiagonal(diag, offdiag);
  const auto n = Eigen::Index(diag.size());
  if (n == 1) return Spectrum({diag[0]});
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(offdiag.data(), n - 1);
  SolverT es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  check_solver(es);
  return to_spectrum(es.eigenvalues());
}

Spectrum eig_dense_sym(const Eigen::MatrixXd& h) {
  require(h.rows() == h.cols() && h.rows() > 0, Errc::DimensionMismatch, "matrix must be square and non-empty");
  require(h == h.transpose(), Errc::InvalidArgument, "matrix must be exactly symmetric");
  SolverT es(h, Eigen::EigenvaluesOnly);
  check_solver(es);
  return to_spectrum(es.eigenvalues());
}

Spectrum eigenvalues(const HamiltonianSample& s) {
  if (const auto* t = std::get_if<Tridiagonal>(&s.storage)) return eig_tridiagonal(t->diag, t->offdiag);
  return eig_dense_sym(std::get<Eigen::MatrixXd>(s.storage));
}

EigenPairs eigenpairs_tridiagonal(std::span<const double> diag, std::span<const double> offdiag) {
  check_tridiagonal(diag, offdiag);
  const auto n = Eigen::Index(diag.size());
  if (n == 1) return {Eigen::VectorXd::Constant(1, diag[0]), Eigen::MatrixXd::Identity(1, 1)};
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(offdiag.data(), n - 1);
  SolverT es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  check_solver(es);
  return {es.eigenvalues(), es.eigenvectors()};
}

EigenPairs eigenpairs_dense(const Eigen::MatrixXd& h) {
  require(h.rows() == h.cols() && h.rows() > 0, Errc::DimensionMismatch, "matrix must be square and non-empty");
  SolverT es(h, Eigen::ComputeEigenvectors);
  check_solver(es);
  return {es.eigenvalues(), es.eigenvectors()};
}

double eigen_residual(const Eigen::MatrixXd& h, const EigenPairs& p) {
  const Eigen::MatrixXd r = h * p.vectors - p.vectors * p.values.asDiagonal();
  return r.colwise().norm().maxCoeff();
}

std::size_t block_size(std::size_t n, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::InvalidArgument, "alpha must be in (0, 1]");
  const double k = std::ceil(alpha * double(n) - 1e-9);
  return std::clamp<std::size_t>(std::size_t(k), 1, n);
}

namespace {

std::vector<std::size_t> permuted_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first k entries of a uniform permutation.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + std::size_t(rng() % std::uint64_t(n - i));
    std::swap(p[i], p[j]);
  }
  p.resize(k);
  return p;
}

}  // namespace

HamiltonianSample permuted_principal_block(const HamiltonianSample& s, double alpha, std::uint64_t seed) {
  const std::size_t n = s.n(), k = block_size(n, alpha);
  const auto idx = permuted_indices(n, k, seed);
  const Eigen::MatrixXd h = s.dense();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(Eigen::Index(k), Eigen::Index(k));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) b(Eigen::Index(i), Eigen::Index(j)) = h(Eigen::Index(idx[i]), Eigen::Index(idx[j]));
  HamiltonianSample out;
  out.storage = std::move(b);
  out.spec = s.spec;
  out.spec.n = k;
  return out;
}

Spectrum permuted_block_spectrum(const HamiltonianSample& s, double alpha, std::uint64_t seed) {
  const auto* t = std::get_if<Tridiagonal>(&s.storage);
  if (!t) return eigenvalues(permuted_principal_block(s, alpha, seed));
  const std::size_t n = s.n(), k = block_size(n, alpha);
  auto idx = permuted_indices(n, k, seed);
  std::sort(idx.begin(), idx.end());
  std::vector<double> d(k), e(k - 1);
  for (std::size_t i = 0; i < k; ++i) d[i] = t->diag[idx[i]];
  for (std::size_t i = 0; i + 1 < k; ++i) e[i] = idx[i + 1] == idx[i] + 1 ? t->offdiag[idx[i]] : 0.0;
  return eig_tridiagonal(d, e);
}

Spectrum haar_block_spectrum(const HamiltonianSample& s, double alpha, std::uint64_t seed) {
  const std::size_t n = s.n(), k = block_size(n, alpha);
  Rng rng(seed);
  const Eigen::MatrixXd q = haar_columns(n, k, rng);
  Eigen::MatrixXd hq;
  if (const auto* t = std::get_if<Tridiagonal>(&s.storage)) {
    hq.resize(q.rows(), q.cols());
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      hq.row(i) = t->diag[std::size_t(i)] * q.row(i);
      if (i > 0) hq.row(i) += t->offdiag[std::size_t(i - 1)] * q.row(i - 1);
      if (i + 1 < q.rows()) hq.row(i) += t->offdiag[std::size_t(i)] * q.row(i + 1);
    }
  } else {
    hq = std::get<Eigen::MatrixXd>(s.storage) * q;
  }
  Eigen::MatrixXd b = q.transpose() * hq;
  b = 0.5 * (b + b.transpose()).eval();
  return eig_dense_sym(b);
}

EnsembleRun run_ensemble(const HamiltonianSpec& spec, std::size_t realizations, int threads, const SpectrumFn& fn) {
  spec.validate();
  require(realizations >= 1, Errc::InvalidArgument, "realizations must be >= 1");
  EnsembleRun run;
  run.spec = spec;
  run.realizations = realizations;
  run.master_seed = spec.seed;
  run.seeds.resize(realizations);
  run.spectra.resize(realizations);
  for (std::size_t i = 0; i < realizations; ++i) run.seeds[i] = derive_seed(spec.seed, i);
  parallel_for(realizations, threads, [&](std::size_t i) {
    const auto s = sample_hamiltonian(spec, i);
    run.spectra[i] = fn ? fn(s, run.seeds[i]) : eigenvalues(s);
  });
  return run;
}

std::vector<double> histogram_grid(const std::vector<Spectrum>& spectra, std::size_t bins, double pad) {
  require(bins >= 2, Errc::InvalidArgument, "need at least two bins");
  require(pad >= 0.0, Errc::InvalidArgument, "pad must be >= 0");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : spectra)
    if (s.n() > 0) {
      lo = std::min(lo, s[0]);
      hi = std::max(hi, s[s.n() - 1]);
    }
  require(lo <= hi, Errc::EmptyInput, "no eigenvalues");
  double span = hi - lo;
  if (span <= 0.0) span = std::max(1.0, std::abs(lo));
  lo -= pad * span;
  hi += pad * span;
  const double w = (hi - lo) / double(bins);
  std::vector<double> g(bins);
  for (std::size_t i = 0; i < bins; ++i) g[i] = lo + (double(i) + 0.5) * w;
  return g;
}

DensityCurve empirical_density(const std::vector<Spectrum>& spectra, std::span<const double> grid) {
  require(!spectra.empty(), Errc::EmptyInput, "no spectra");
  const double h = uniform_step(grid);
  const double lo = grid.front() - 0.5 * h;
  const std::size_t bins = grid.size();
  std::vector<double> counts(bins, 0.0);
  std::size_t total = 0;
  for (const auto& s : spectra) {
    total += s.n();
    for (double x : s.eigenvalues()) {
      const double u = (x - lo) / h;
      if (u < 0.0) continue;
      auto b = std::size_t(u);
      if (b >= bins) {
        if (u <= double(bins) * (1.0 + 1e-12)) b = bins - 1;
        else continue;
      }
      counts[b] += 1.0;
    }
  }
  require(total > 0, Errc::EmptyInput, "no eigenvalues");
  for (auto& c : counts) c /= double(total) * h;
  return DensityCurve({grid.begin(), grid.end()}, std::move(counts));
}

DensityCurve kde_density(const std::vector<Spectrum>& spectra, std::span<const double> grid, double bandwidth) {
  std::vector<double> x;
  for (const auto& s : spectra) x.insert(x.end(), s.eigenvalues().begin(), s.eigenvalues().end());
  require(!x.empty(), Errc::EmptyInput, "no eigenvalues");
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  if (bandwidth <= 0.0) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / std::max(1.0, n - 1.0));
    const double iqr = x[std::size_t(0.75 * (n - 1))] - x[std::size_t(0.25 * (n - 1))];
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd > 0.0 ? sd : 1.0;
    bandwidth = 0.9 * spread * std::pow(n, -0.2);
  }
  const double norm = 1.0 / (n * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto a = std::lower_bound(x.begin(), x.end(), grid[i] - 8.0 * bandwidth);
    auto b = std::upper_bound(x.begin(), x.end(), grid[i] + 8.0 * bandwidth);
    double s = 0.0;
    for (auto it = a; it != b; ++it) {
      const double u = (grid[i] - *it) / bandwidth;
      s += std::exp(-0.5 * u * u);
    }
    v[i] = s * norm;
  }
  return DensityCurve({grid.begin(), grid.end()}, std::move(v));
}

Metric parse_metric(const std::string& s) {
  if (s == "l1" || s == "L1") return Metric::L1;
  if (s == "ks" || s == "KS") return Metric::KS;
  if (s == "linf" || s == "Linf" || s == "LINF") return Metric::Linf;
  fail(Errc::InvalidArgument, "unknown metric '" + s + "' (expected l1, ks or linf)");
}

double curve_distance(const DensityCurve& a, const DensityCurve& b, Metric metric, std::optional<Window> window) {
  require(a.size() >= 2 && b.size() >= 2, Errc::EmptyInput, "curves need at least two points");
  const Window w = window.value_or(Window{a.grid.front(), a.grid.back()});
  require(w.hi > w.lo, Errc::InvalidArgument, "window must have hi > lo");
  std::vector<double> x, d, va, vb;
  std::vector<std::uint8_t> ok;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double g = a.grid[i];
    if (g < w.lo || g > w.hi) continue;
    const double tol = 1e-12 * std::max(1.0, std::abs(g));
    if (g < b.grid.front() - tol || g > b.grid.back() + tol)
      fail(Errc::GridMismatch, "second curve does not cover the comparison window");
    auto it = std::upper_bound(b.grid.begin(), b.grid.end(), g);
    std::size_t k = std::clamp<std::size_t>(std::size_t(it - b.grid.begin()), 1, b.size() - 1);
    const std::size_t j = k - 1;
    const double t = std::clamp((g - b.grid[j]) / (b.grid[k] - b.grid[j]), 0.0, 1.0);
    const double bv = (1.0 - t) * b.values[j] + t * b.values[k];
    const bool good = a.valid[i] && b.valid[j] && b.valid[k] && std::isfinite(bv);
    x.push_back(g);
    va.push_back(a.values[i]);
    vb.push_back(bv);
    d.push_back(std::abs(a.values[i] - bv));
    ok.push_back(good);
  }
  if (x.empty()) fail(Errc::GridMismatch, "window contains no grid points");
  double out = 0.0;
  if (metric == Metric::Linf) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (ok[i]) out = std::max(out, d[i]);
  } else if (metric == Metric::L1) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      if (ok[i] && ok[i + 1]) out += 0.5 * (d[i] + d[i + 1]) * (x[i + 1] - x[i]);
  } else {
    double ca = 0.0, cb = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (!(ok[i] && ok[i + 1])) continue;
      ca += 0.5 * (va[i] + va[i + 1]) * (x[i + 1] - x[i]);
      cb += 0.5 * (vb[i] + vb[i + 1]) * (x[i + 1] - x[i]);
      out = std::max(out, std::abs(ca - cb));
    }
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'F', 'S', 'P', 'C'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put_le(std::ostream& os, T v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(T));
  char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = char((bits >> (8 * i)) & 0xFF);
  os.write(b, sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) fail(Errc::Io, "truncated spectra file");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= std::uint64_t(b[i]) << (8 * i);
  T v;
  std::memcpy(&v, &bits, sizeof(T));
  return v;
}

}  // namespace

void write_spectra(const std::string& path, const std::vector<Spectrum>& spectra) {
  const std::uint64_t n = spectra.empty() ? 0 : spectra.front().n();
  for (const auto& s : spectra)
    require(s.n() == n, Errc::DimensionMismatch, "all spectra must have the same length");
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::Io, "cannot open '" + path + "' for writing");
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, kFormatVersion);
  put_le<std::uint64_t>(os, n);
  put_le<std::uint64_t>(os, spectra.size());
  for (const auto& s : spectra)
    for (double x : s.eigenvalues()) put_le<double>(os, x);
  if (!os) fail(Errc::Io, "write to '" + path + "' failed");
}

std::vector<Spectrum> read_spectra(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::Io, "cannot open '" + path + "'");
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) fail(Errc::Io, "'" + path + "' is not an FSPC file");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kFormatVersion) fail(Errc::Io, "unsupported FSPC version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(is);
  const auto r = get_le<std::uint64_t>(is);
  std::vector<Spectrum> out;
  out.reserve(std::size_t(r));
  for (std::uint64_t k = 0; k < r; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = get_le<double>(is);
    out.emplace_back(std::move(v));
  }
  if (is.peek() != std::char_traits<char>::eof()) fail(Errc::Io, "trailing bytes in '" + path + "'");
  return out;
}

}  // namespace freespec
