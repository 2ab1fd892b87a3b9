#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "freespec/ensembles.hpp"
#include "freespec/error.hpp"

using namespace freespec;

namespace {

double semicircle_cdf(double x) {
  const double t = std::clamp(x / 2.0, -1.0, 1.0);
  return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / std::numbers::pi;
}

}  // namespace

TEST_CASE("seed derivation is a pure function") {
  CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  CHECK(derive_seed(42, 3) != derive_seed(42, 4));
  CHECK(derive_seed(42, 3) != derive_seed(43, 3));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS((HamiltonianSpec{TridiagChain{1.0}, 1, 0}.validate()), Error);
  CHECK_THROWS_AS((HamiltonianSpec{TridiagChain{-1.0}, 4, 0}.validate()), Error);
  CHECK_THROWS_AS((HamiltonianSpec{RosenzweigPorter{-0.5, 1.0}, 4, 0}.validate()), Error);
  CHECK_THROWS_AS((HamiltonianSpec{AndersonTridiag{1.0, DiagDist::gaussian(0.0)}, 4, 0}.validate()), Error);
  CHECK_NOTHROW((HamiltonianSpec{Goe{}, 4, 0}.validate()));
}

TEST_CASE("chain of three") {
  const auto s = sample_hamiltonian({TridiagChain{1.0}, 3, 7}, 0);
  REQUIRE(s.is_tridiagonal());
  const auto& t = std::get<Tridiagonal>(s.storage);
  CHECK(t.diag == std::vector<double>{0, 0, 0});
  CHECK(t.offdiag == std::vector<double>{1, 1});
  const auto e = eigenvalues(s);
  REQUIRE(e.n() == 3);
  CHECK(std::abs(e[0] + std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(e[1]) < 1e-14);
  CHECK(std::abs(e[2] - std::sqrt(2.0)) < 1e-14);
  CHECK(eig_tridiagonal(std::vector<double>{2.5}, std::vector<double>{})[0] == 2.5);
  CHECK_THROWS_AS(eig_tridiagonal(std::vector<double>{1, 2}, std::vector<double>{}), Error);
}

TEST_CASE("decoupled Anderson sites") {
  for (auto d : {DiagDist::gaussian(1.3), DiagDist::semicircle(1.0)}) {
    const auto s = sample_hamiltonian({AndersonTridiag{0.0, d}, 50, 11}, 2);
    auto diag = std::get<Tridiagonal>(s.storage).diag;
    std::sort(diag.begin(), diag.end());
    const auto e = eigenvalues(s);
    for (std::size_t i = 0; i < diag.size(); ++i) CHECK(std::abs(e[i] - diag[i]) < 1e-14);
  }
}

TEST_CASE("RP at infinite gamma is the diagonal") {
  const auto s = sample_hamiltonian({RosenzweigPorter{INFINITY, 0.5}, 40, 3}, 0);
  const Eigen::MatrixXd h = s.dense();
  const Eigen::VectorXd hd = h.diagonal();
  std::vector<double> d(hd.data(), hd.data() + 40);
  std::sort(d.begin(), d.end());
  CHECK((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).norm() == 0.0);
  const auto e = eigenvalues(s);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(e[i] - d[i]) < 1e-14);
}

TEST_CASE("dense examples") {
  Eigen::MatrixXd h(2, 2);
  h << 0, 0.7, 0.7, 0;
  const auto e = eig_dense_sym(h);
  CHECK(std::abs(e[0] + 0.7) < 1e-15);
  CHECK(std::abs(e[1] - 0.7) < 1e-15);
  Eigen::MatrixXd d = Eigen::Vector3d(3, -1, 2).asDiagonal();
  CHECK(eig_dense_sym(d).eigenvalues() == std::vector<double>{-1, 2, 3});
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1.5, 0;
  CHECK_THROWS_AS(eig_dense_sym(a), Error);
}

TEST_CASE("GOE normalization") {
  Rng rng(5);
  const std::size_t n = 400;
  double off = 0.0, diag = 0.0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const auto h = sample_goe(n, rng);
    CHECK(h == h.transpose());
    diag += h.diagonal().squaredNorm() / double(n);
    off += (h.squaredNorm() - h.diagonal().squaredNorm()) / double(n * (n - 1));
  }
  CHECK(std::abs(off / reps * n - 1.0) < 0.02);
  CHECK(std::abs(diag / reps * n - 2.0) < 0.1);
}

TEST_CASE("eigensolver residuals") {
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 5 + 7 * std::size_t(k);
    const auto h = sample_goe(n, rng);
    const auto p = eigenpairs_dense(h);
    CHECK(eigen_residual(h, p) <= 1e-8 * h.norm());
    const auto s = sample_hamiltonian({AndersonTridiag{0.8, DiagDist::gaussian(1.0)}, n, std::uint64_t(k)}, 0);
    const auto& t = std::get<Tridiagonal>(s.storage);
    const auto q = eigenpairs_tridiagonal(t.diag, t.offdiag);
    CHECK(eigen_residual(t.dense(), q) <= 1e-8 * s.norm());
    const auto e = eigenvalues(s);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e[i] - q.values(Eigen::Index(i))) <= 1e-10 * s.norm());
  }
}

TEST_CASE("trace equals eigenvalue sum") {
  const std::vector<Model> models = {AndersonTridiag{1.0, DiagDist::gaussian(1.0)}, RosenzweigPorter{1.5, 0.3}, Goe{},
                                     TridiagChain{1.0}};
  for (const auto& m : models)
    for (std::size_t i = 0; i < 3; ++i) {
      const auto s = sample_hamiltonian({m, 60, 9}, i);
      CHECK(std::abs(eigenvalues(s).mean() - s.trace() / 60.0) <= 1e-12 * std::max(1.0, s.norm()));
    }
}

TEST_CASE("semicircle sampler") {
  Rng rng(2024);
  const std::size_t n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = sample_semicircle(rng);
  std::sort(x.begin(), x.end());
  CHECK(x.front() >= -2.0);
  CHECK(x.back() <= 2.0);
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = semicircle_cdf(x[i]);
    ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
  }
  MESSAGE("semicircle sampler KS: " << ks);
  CHECK(ks <= 1.63 / std::sqrt(double(n)));

  Rng r2(1);
  std::vector<double> y(5000);
  for (auto& v : y) v = sample_semicircle(r2);
  // 0.25-wide bins, leaving out the two edge bins.
  const auto c = empirical_density({Spectrum(y)}, linspace(-1.875, 1.875, 16));
  const auto grid = linspace(-1.625, 1.625, 14);
  double linf = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    linf = std::max(linf, std::abs(c.values[i + 1] - density(Measure::semicircle(1.0), grid[i])));
  MESSAGE("semicircle sampler histogram Linf: " << linf);
  CHECK(linf <= 0.05);
  Rng r3(8);
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(sample_semicircle(r3, 4.0)) <= 4.0);
}

TEST_CASE("histogram") {
  const auto c = empirical_density({Spectrum({-1.0, 1.0})}, std::vector<double>{-1.0, 1.0});
  CHECK(c.values == std::vector<double>{0.25, 0.25});
  const auto g = histogram_grid({Spectrum({-1.0, 1.0})});
  CHECK(g.size() == 200);
  CHECK(std::abs(g.front() - (-1.04 + 0.5 * 2.08 / 200)) < 1e-14);
  CHECK_THROWS_AS(empirical_density({}, g), Error);
  CHECK_THROWS_AS(empirical_density({Spectrum({0.0})}, std::vector<double>{0.0, 1.0, 3.0}), Error);

  Rng rng(3);
  std::vector<double> x(20000);
  std::normal_distribution<double> normal;
  for (auto& v : x) v = normal(rng);
  const std::vector<Spectrum> pooled = {Spectrum(x)};
  const auto grid = histogram_grid(pooled, 100);
  const auto h = empirical_density(pooled, grid);
  double sum = 0.0;
  for (double v : h.values) sum += v * (grid[1] - grid[0]);
  CHECK(std::abs(sum - 1.0) < 1e-12);
  const auto k = kde_density(pooled, grid);
  CHECK(std::abs(k.mass() - 1.0) < 1e-3);
  CHECK(curve_distance(h, k, Metric::L1) < 0.05);
}

TEST_CASE("curve distance") {
  const auto grid = linspace(-2.0, 2.0, 200001);
  std::vector<double> as(grid.size()), sc(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    as[i] = density(Measure::arcsine(), grid[i]);
    sc[i] = density(Measure::semicircle(1.0), grid[i]);
  }
  const DensityCurve a(grid, as), s(grid, sc);
  CHECK(curve_distance(a, a, Metric::L1) == 0.0);
  CHECK(curve_distance(a, a, Metric::KS) == 0.0);
  CHECK(curve_distance(a, a, Metric::Linf) == 0.0);
  CHECK(std::abs(curve_distance(a, s, Metric::L1) - 2.0 / std::numbers::pi) < 1e-2);
  CHECK(std::abs(curve_distance(s, a, Metric::L1, Window{-1.0, 1.0}) -
                 curve_distance(a, s, Metric::L1, Window{-1.0, 1.0})) < 1e-12);

  // Linear functions: interpolation is exact.
  const auto g1 = linspace(0.0, 1.0, 11), g2 = linspace(-0.5, 1.5, 7);
  std::vector<double> v1, v2;
  for (double x : g1) v1.push_back(x);
  for (double x : g2) v2.push_back(x + 0.5);
  const DensityCurve c1(g1, v1), c2(g2, v2);
  CHECK(std::abs(curve_distance(c1, c2, Metric::L1) - 0.5) < 1e-14);
  CHECK(std::abs(curve_distance(c1, c2, Metric::Linf) - 0.5) < 1e-14);
  CHECK(std::abs(curve_distance(c1, c2, Metric::KS) - 0.5) < 1e-14);
  CHECK(std::abs(curve_distance(c1, c2, Metric::L1, Window{0.15, 0.65}) - 0.2) < 1e-14);
  CHECK_THROWS_AS(curve_distance(c2, c1, Metric::L1), Error);
  CHECK(parse_metric("ks") == Metric::KS);
  CHECK_THROWS_AS(parse_metric("l2"), Error);
}

TEST_CASE("KS between a histogram and its generating density") {
  Rng rng(99);
  const std::size_t n = 20000;
  std::vector<double> x(n);
  for (auto& v : x) v = sample_semicircle(rng);
  const auto grid = linspace(-2.0, 2.0, 401);
  const auto h = empirical_density({Spectrum(x)}, grid);
  std::vector<double> d;
  for (double g : grid) d.push_back(density(Measure::semicircle(1.0), g));
  const double ks = curve_distance(h, DensityCurve(grid, d), Metric::KS);
  MESSAGE("histogram KS: " << ks);
  CHECK(ks <= 1.63 / std::sqrt(double(n)));
}

TEST_CASE("permuted principal blocks") {
  const auto s = sample_hamiltonian({AndersonTridiag{0.7, DiagDist::gaussian(1.0)}, 30, 4}, 0);
  const auto full = permuted_principal_block(s, 1.0, 77);
  CHECK(full.n() == 30);
  const auto e0 = eigenvalues(s), e1 = eigenvalues(full);
  for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(e0[i] - e1[i]) <= 1e-9);

  const auto dense_block = permuted_principal_block(s, 0.5, 123);
  CHECK(dense_block.n() == 15);
  const auto fast = permuted_block_spectrum(s, 0.5, 123);
  const auto slow = eigenvalues(dense_block);
  for (std::size_t i = 0; i < 15; ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-12);
  CHECK(block_size(4000, 0.5) == 2000);
  CHECK(block_size(10, 0.33) == 4);

  // Diagonal input: the block is a subset of the diagonal.
  const auto d = sample_hamiltonian({AndersonTridiag{0.0, DiagDist::gaussian(1.0)}, 20, 5}, 0);
  const auto& diag = std::get<Tridiagonal>(d.storage).diag;
  const auto b = permuted_principal_block(d, 0.4, 9).dense();
  CHECK(b.rows() == 8);
  CHECK((b - Eigen::MatrixXd(b.diagonal().asDiagonal())).norm() == 0.0);
  for (Eigen::Index i = 0; i < b.rows(); ++i) CHECK(std::find(diag.begin(), diag.end(), b(i, i)) != diag.end());

  const auto hb = haar_block_spectrum(s, 0.5, 1);
  CHECK(hb.n() == 15);
  CHECK(hb[0] >= e0[0] - 1e-9);
  CHECK(hb[14] <= e0[29] + 1e-9);
}

TEST_CASE("haar orthogonal") {
  Rng rng(12);
  const auto q = haar_orthogonal(30, rng);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(30, 30)).norm() < 1e-12);
}

TEST_CASE("ensemble runs are reproducible across worker counts") {
  const HamiltonianSpec spec{AndersonTridiag{1.0, DiagDist::semicircle(1.0)}, 64, 42};
  const auto a = run_ensemble(spec, 12, 1), b = run_ensemble(spec, 12, 5);
  REQUIRE(a.spectra.size() == 12);
  CHECK(a.seeds == b.seeds);
  for (std::size_t i = 0; i < 12; ++i) CHECK(a.spectra[i].eigenvalues() == b.spectra[i].eigenvalues());
  CHECK(a.seeds[3] == derive_seed(42, 3));
  const auto c = run_ensemble({Goe{}, 40, 42}, 4, 3);
  const auto d = run_ensemble({Goe{}, 40, 42}, 4, 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(c.spectra[i].eigenvalues() == d.spectra[i].eigenvalues());
  const auto blocks = run_ensemble(spec, 6, 4, [](const HamiltonianSample& s, std::uint64_t seed) {
    return permuted_block_spectrum(s, 0.5, derive_seed(seed, 1));
  });
  CHECK(blocks.spectra[0].n() == 32);
}

TEST_CASE("GOE spectra approach the semicircle") {
  const auto run = run_ensemble({Goe{}, 1000, 1}, 10, 4);
  const auto grid = linspace(-2.2, 2.2, 89);
  const auto h = empirical_density(run.spectra, grid);
  std::vector<double> d;
  for (double g : grid) d.push_back(density(Measure::semicircle(1.0), g));
  const double l1 = curve_distance(h, DensityCurve(grid, d), Metric::L1);
  MESSAGE("GOE L1: " << l1);
  CHECK(l1 <= 0.03);
}

TEST_CASE("spectra file round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "freespec_test_spectra.bin").string();
  const std::vector<Spectrum> s = {Spectrum({-1.5, 0.25, 3.0}), Spectrum({0.0, 1e-300, 7.5})};
  write_spectra(path, s);
  const auto back = read_spectra(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].eigenvalues() == s[0].eigenvalues());
  CHECK(back[1].eigenvalues() == s[1].eigenvalues());
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + 8 + 6 * 8);
  CHECK_THROWS_AS(write_spectra(path, {Spectrum({1.0}), Spectrum({1.0, 2.0})}), Error);
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("NOPE", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_spectra(path), Error);
  std::filesystem::remove(path);
}
