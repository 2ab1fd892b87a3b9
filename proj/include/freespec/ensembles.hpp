#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "freespec/measure.hpp"
#include "freespec/rng.hpp"
#include "freespec/transforms.hpp"

namespace freespec {

struct DiagDist {
  enum class Kind { Gaussian, Semicircle };
  Kind kind = Kind::Gaussian;
  /// sigma for Gaussian, variance for Semicircle.
  double param = 1.0;

  static DiagDist gaussian(double sigma) { return {Kind::Gaussian, sigma}; }
  static DiagDist semicircle(double variance = 1.0) { return {Kind::Semicircle, variance}; }
};

/// Open chain: diagonal i.i.d. from `diag`, every hopping equal to J.
struct AndersonTridiag {
  double J = 1.0;
  DiagDist diag;
};
/// diag(N(0, sigma_diag^2)) + N^{-gamma/2} GOE.
struct RosenzweigPorter {
  double gamma = 1.5;
  double sigma_diag = 1.0;
};
/// Off-diagonal variance 1/N, diagonal variance 2/N.
struct Goe {};
struct TridiagChain {
  double J = 1.0;
};

using Model = std::variant<AndersonTridiag, RosenzweigPorter, Goe, TridiagChain>;

struct HamiltonianSpec {
  Model model = TridiagChain{};
  std::size_t n = 2;
  std::uint64_t seed = 0;
  void validate() const;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
  Eigen::MatrixXd dense() const;
};

struct HamiltonianSample {
  std::variant<Eigen::MatrixXd, Tridiagonal> storage;
  HamiltonianSpec spec;

  bool is_tridiagonal() const { return std::holds_alternative<Tridiagonal>(storage); }
  std::size_t n() const;
  double trace() const;
  /// Frobenius norm.
  double norm() const;
  Eigen::MatrixXd dense() const;
};

/// Draw from the semicircle law by inverting its CDF (safeguarded Newton, tol 1e-12).
double sample_semicircle(Rng& rng, double variance = 1.0);
Eigen::MatrixXd sample_goe(std::size_t n, Rng& rng);
/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, signs fixed by diag R).
Eigen::MatrixXd haar_orthogonal(std::size_t n, Rng& rng);

/// Uses the stream derive_seed(spec.seed, index).
HamiltonianSample sample_hamiltonian(const HamiltonianSpec& spec, std::size_t index);

Spectrum eig_tridiagonal(std::span<const double> diag, std::span<const double> offdiag);
Spectrum eig_dense_sym(const Eigen::MatrixXd& h);
Spectrum eigenvalues(const HamiltonianSample& s);

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
EigenPairs eigenpairs_tridiagonal(std::span<const double> diag, std::span<const double> offdiag);
EigenPairs eigenpairs_dense(const Eigen::MatrixXd& h);
/// max_i |H v_i - lambda_i v_i|.
double eigen_residual(const Eigen::MatrixXd& h, const EigenPairs& p);

std::size_t block_size(std::size_t n, double alpha);
/// Top-left ceil(alpha N) block of P H P^T for a uniform random permutation P.
HamiltonianSample permuted_principal_block(const HamiltonianSample& s, double alpha, std::uint64_t seed);
/// Spectrum of permuted_principal_block(s, alpha, seed). For tridiagonal input the
/// block is conjugate to H restricted to a sorted index subset, which is again
/// tridiagonal; that path draws the same subset and skips the dense solve.
Spectrum permuted_block_spectrum(const HamiltonianSample& s, double alpha, std::uint64_t seed);
/// Top-left ceil(alpha N) block of O H O^T with O Haar orthogonal.
Spectrum haar_block_spectrum(const HamiltonianSample& s, double alpha, std::uint64_t seed);

/// Maps a realization to its spectrum; the second argument is that realization's seed.
using SpectrumFn = std::function<Spectrum(const HamiltonianSample&, std::uint64_t)>;

struct EnsembleRun {
  HamiltonianSpec spec;
  std::size_t realizations = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<Spectrum> spectra;
};

EnsembleRun run_ensemble(const HamiltonianSpec& spec, std::size_t realizations, int threads = 1,
                         const SpectrumFn& fn = {});

/// Bin centres for `bins` bins over the pooled range padded by `pad` on each side.
std::vector<double> histogram_grid(const std::vector<Spectrum>& spectra, std::size_t bins = 200, double pad = 0.02);
/// Pooled histogram on bins centred at the uniform grid points (width = step).
/// Normalized by the pooled count, so mass is 1 when every eigenvalue lands in a bin.
DensityCurve empirical_density(const std::vector<Spectrum>& spectra, std::span<const double> grid);
/// Gaussian KDE; bandwidth <= 0 selects Silverman's rule.
DensityCurve kde_density(const std::vector<Spectrum>& spectra, std::span<const double> grid, double bandwidth = 0.0);

enum class Metric { L1, KS, Linf };
Metric parse_metric(const std::string& s);
struct Window {
  double lo;
  double hi;
};
/// b is resampled onto a's grid by linear interpolation; points invalid in either curve are skipped.
double curve_distance(const DensityCurve& a, const DensityCurve& b, Metric metric,
                      std::optional<Window> window = std::nullopt);

void write_spectra(const std::string& path, const std::vector<Spectrum>& spectra);
std::vector<Spectrum> read_spectra(const std::string& path);

}  // namespace freespec
