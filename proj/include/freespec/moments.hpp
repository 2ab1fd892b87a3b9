#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "freespec/rng.hpp"
#include "freespec/transforms.hpp"

namespace freespec {

enum class CouplingKind { Native, Permutation, HaarOrthogonal };

struct MomentReport {
  /// m[k-1] = (1/N) tr C^k, averaged over realizations.
  std::array<double, 4> m{};
  /// Standard errors of the averages.
  std::array<double, 4> stderr_m{};
  double stderr4 = 0.0;
  int realizations = 0;
};

Eigen::MatrixXd haar_orthogonal(std::size_t n, std::uint64_t seed);

/// Moments of Lambda_a + Q^T Lambda_b Q. Permutation and HaarOrthogonal draw a
/// fresh Q per realization from derive_seed(seed, r); Native adds the two
/// diagonals as given.
MomentReport coupled_moments(const Spectrum& a, const Spectrum& b, CouplingKind coupling, std::uint64_t seed,
                             int realizations = 1, int threads = 1);
/// (1/N) tr (A + B)^k for k = 1..4.
MomentReport native_moments(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

using MatrixSampler = std::function<Eigen::MatrixXd(std::size_t n, Rng& rng)>;
/// diag-normal, goe, perm-diag-normal, identity.
MatrixSampler matrix_model(const std::string& name);

struct PEstimate {
  double p = 0.0;
  double stderr_p = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double stderr_denominator = 0.0;
  /// (1/N) tr (A + B)^4 and the same with B replaced by its permuted / Haar-rotated spectrum.
  double m4_native = 0.0;
  double m4_classical = 0.0;
  double m4_free = 0.0;
  int realizations = 0;
};

/// p = (<A^2 B^2> - <(AB)^2>) / (<A^2 B^2> - <(A Q^T Lambda_b Q)^2>) as a ratio of
/// realization means; stderr by the delta method.
PEstimate p_parameter(const MatrixSampler& a, const MatrixSampler& b, std::size_t n, int realizations,
                      std::uint64_t seed, int threads = 1);

/// p rho_f + (1 - p) rho_c.
DensityCurve moment_matched_density(const DensityCurve& rho_c, const DensityCurve& rho_f, double p);

}  // namespace freespec
