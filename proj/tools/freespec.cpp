// freespec command-line driver.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freespec/compression.hpp"
#include "freespec/convolution.hpp"
#include "freespec/ensembles.hpp"
#include "freespec/error.hpp"
#include "freespec/io.hpp"
#include "freespec/moments.hpp"
#include "freespec/perturbation.hpp"
#include "freespec/transforms.hpp"

using namespace freespec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCompareFail = 3;

// Flags that name outputs or cap workers do not change artifact content.
const std::vector<std::string> kNonSemantic = {"--out", "--hist", "--threads", "--check-pde"};

std::string canonical_flags(const CLI::App& sub) {
  std::map<std::string, std::string> flags;
  for (const CLI::Option* o : sub.get_options()) {
    if (o->count() == 0) continue;
    const std::string name = "--" + o->get_lnames().front();
    if (std::find(kNonSemantic.begin(), kNonSemantic.end(), name) != kNonSemantic.end()) continue;
    std::string v;
    for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
    flags[name] = v;
  }
  std::string out = sub.get_name();
  for (const auto& [k, v] : flags) out += " " + k + (v.empty() ? "" : "=" + v);
  return out;
}

Measure measure_arg(const std::string& s) {
  if (!s.empty() && s.front() == '{') return parse_measure(s);
  if (std::filesystem::exists(s)) return load_measure(s);
  return parse_measure("\"" + s + "\"");
}

CsvTable curve_table(const DensityCurve& c) {
  CsvTable t{{"lambda", "density", "valid"}, {}};
  for (std::size_t i = 0; i < c.size(); ++i) t.rows.push_back({c.grid[i], c.values[i], double(c.valid[i])});
  return t;
}

CsvTable solved_table(const SolvedCurve& s) {
  CsvTable t{{"lambda", "density", "converged", "iters"}, {}};
  for (std::size_t i = 0; i < s.curve.size(); ++i)
    t.rows.push_back({s.curve.grid[i], s.curve.values[i], double(s.converged[i]), double(s.iterations[i])});
  return t;
}

int solver_status(std::size_t failures, std::size_t points) {
  if (failures == 0) return kExitOk;
  std::cerr << "freespec: " << failures << " of " << points << " points did not converge\n";
  return double(failures) > 0.01 * double(points) ? kExitSolver : kExitOk;
}

void emit_csv(const std::string& out, const CsvTable& t, std::uint64_t seed, const std::string& cmd) {
  if (out.empty() || out == "-") {
    const std::string tmp = (std::filesystem::temp_directory_path() / "freespec_stdout.csv").string();
    write_csv(tmp, t, seed, cmd);
    std::ifstream is(tmp);
    std::cout << is.rdbuf();
    std::filesystem::remove(tmp);
  } else {
    write_csv(out, t, seed, cmd);
  }
}

struct Common {
  int threads = 1;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* sub, Common& c, bool with_seed,
                const std::string& out_help = "Output CSV ('-' or omitted: stdout)") {
  sub->add_option("--threads", c.threads, "Worker threads (output does not depend on this)")->check(CLI::PositiveNumber);
  if (with_seed) sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--out", c.out, out_help);
}

FixedPointConfig solver_options(CLI::App* sub, FixedPointConfig& cfg) {
  sub->add_option("--damping", cfg.damping, "Fixed-point damping in (0, 1]");
  sub->add_option("--tol", cfg.tol, "Fixed-point residual tolerance");
  sub->add_option("--max-iter", cfg.max_iter, "Fixed-point iteration cap");
  return cfg;
}

// invert ---------------------------------------------------------------------

struct InvertArgs {
  Common c;
  std::string measure, grid;
  double eps = 1e-6;
  bool extrapolate = false;
};

int run_invert(const CLI::App& sub, const InvertArgs& a) {
  const Measure m = measure_arg(a.measure);
  const auto curve = stieltjes_invert(cauchy_fn(m), parse_grid(a.grid), a.eps, a.extrapolate);
  emit_csv(a.c.out, curve_table(curve), a.c.seed, canonical_flags(sub));
  return solver_status(curve.invalid_count(), curve.size());
}

// convolve -------------------------------------------------------------------

struct ConvolveArgs {
  Common c;
  std::string a, b, grid;
  double eps = 1e-3;
  FixedPointConfig cfg;
};

int run_convolve(const CLI::App& sub, const ConvolveArgs& a) {
  const auto s = free_convolve_density(measure_arg(a.a), measure_arg(a.b), parse_grid(a.grid), a.eps, a.cfg, a.c.threads);
  emit_csv(a.c.out, solved_table(s), a.c.seed, canonical_flags(sub));
  return solver_status(s.failures(), s.curve.size());
}

// perturb --------------------------------------------------------------------

struct PerturbArgs {
  Common c;
  std::string base = "arcsine", kind = "semicircle", grid, preset;
  double alpha = 0.1;
  int order = 1;
  double eps = 1e-6;
  double J = 0.0, sigma = 0.0, gamma = 1.5;
  int N = 2000;
};

int run_perturb(const CLI::App& sub, PerturbArgs a) {
  PerturbationSpec spec;
  double scale = 1.0;
  std::string default_grid;
  const bool order_given = sub.get_option("--order")->count() > 0;
  if (a.preset.empty()) {
    spec.base = measure_arg(a.base);
    if (a.kind == "semicircle") spec.kind = PerturbationKind::Semicircle;
    else if (a.kind == "arcsine") spec.kind = PerturbationKind::Arcsine;
    else throw CLI::ValidationError("--kind", "must be semicircle or arcsine");
    spec.alpha = a.alpha;
    spec.order = a.order;
  } else if (a.preset == "anderson-high-j") {
    // H / J = chain + (1/J) diag(semicircle): semicircle perturbation of the arcsine.
    const double J = a.J > 0 ? a.J : 10.0;
    spec = {Measure::arcsine(), PerturbationKind::Semicircle, 1.0 / J, order_given ? a.order : 2};
    scale = J;
    default_grid = format_double(-2.5 * J) + ":" + format_double(2.5 * J) + ":1001";
  } else if (a.preset == "anderson-low-j") {
    const double J = a.J > 0 ? a.J : 0.2;
    spec = {Measure::semicircle(1.0), PerturbationKind::Arcsine, J, order_given ? a.order : 1};
    default_grid = "-3:3:1201";
  } else if (a.preset == "anderson-gaussian") {
    const double J = a.J > 0 ? a.J : 0.2;
    const double sigma = a.sigma > 0 ? a.sigma : 1.0;
    spec = {Measure::gaussian(sigma), PerturbationKind::Arcsine, J, order_given ? a.order : 1};
    default_grid = format_double(-5 * sigma - 2 * J) + ":" + format_double(5 * sigma + 2 * J) + ":1001";
  } else if (a.preset == "rp") {
    if (a.N < 2) throw CLI::ValidationError("--N", "must be >= 2");
    const double sigma = a.sigma > 0 ? a.sigma : std::sqrt(4.0 / a.N);
    const double alpha = std::pow(double(a.N), -0.5 * a.gamma);
    if (a.gamma <= 1.0) std::cerr << "freespec: warning: gamma <= 1 is outside the regime where the expansion applies\n";
    spec = {Measure::gaussian(sigma), PerturbationKind::Semicircle, alpha, order_given ? a.order : 2};
    const double r = 6.0 * sigma + 3.0 * alpha;
    default_grid = format_double(-r) + ":" + format_double(r) + ":1001";
  } else {
    throw CLI::ValidationError("--preset", "unknown preset '" + a.preset + "'");
  }
  const auto grid = parse_grid(a.grid.empty() ? (default_grid.empty() ? "" : default_grid) : a.grid);
  std::vector<double> scaled(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) scaled[i] = grid[i] / scale;
  auto curve = perturbed_density(spec, scaled, a.eps);
  curve.grid = grid;
  for (auto& v : curve.values) v /= scale;
  emit_csv(a.c.out, curve_table(curve), a.c.seed, canonical_flags(sub));
  std::size_t failed = 0;
  for (double v : curve.values) failed += std::isnan(v);
  return solver_status(failed, curve.size());
}

// compress -------------------------------------------------------------------

struct CompressArgs {
  Common c;
  std::string measure, grid, closed = "auto", check_pde;
  double alpha = 0.5;
  double eps = 1e-5;
  FixedPointConfig cfg;
};

int run_compress(const CLI::App& sub, const CompressArgs& a) {
  const Measure m = measure_arg(a.measure);
  const auto grid = parse_grid(a.grid);
  std::string form = a.closed;
  const bool km_like = std::holds_alternative<Arcsine>(m.kind()) || std::holds_alternative<KestenMcKay>(m.kind());
  const bool bern = std::holds_alternative<Bernoulli>(m.kind());
  const bool ortho = std::holds_alternative<OrthoPoly>(m.kind());
  if (form == "auto") form = km_like ? "km" : bern && a.alpha <= 1.0 ? "bernoulli" : ortho ? "orthopoly" : "none";
  if ((form == "km" && !km_like) || (form == "bernoulli" && !bern) || (form == "orthopoly" && !ortho))
    throw CLI::ValidationError("--closed-form", "'" + form + "' does not apply to a " + m.name() + " measure");

  const double eta = std::holds_alternative<KestenMcKay>(m.kind()) ? std::get<KestenMcKay>(m.kind()).eta : 2.0;
  CauchyFamily family;
  SolvedCurve s;
  if (form == "km") {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = compress_km_density(eta, a.alpha, grid[i]);
    s.curve = DensityCurve(grid, v);
    family = [eta](double u, Complex z) { return compress_km_closed(eta, std::exp(u), z); };
  } else if (form == "bernoulli") {
    s.curve = stieltjes_invert([&](Complex z) { return compress_bernoulli_closed(a.alpha, z); }, grid, a.eps, true);
    family = [](double u, Complex z) { return compress_bernoulli_closed(std::exp(u), z); };
  } else if (form == "orthopoly") {
    const auto& o = std::get<OrthoPoly>(m.kind());
    const Measure mc = Measure::orthopoly(o.a * a.alpha, o.b * a.alpha);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = density(mc, grid[i]);
    s.curve = DensityCurve(grid, v);
    family = [o](double u, Complex z) { return compress_orthopoly_closed(o.a, o.b, std::exp(u), z); };
  } else if (form == "none") {
    s = compress_density(cauchy_fn(m), a.alpha, grid, a.eps, a.cfg, a.c.threads);
    auto g = cauchy_fn(m);
    FixedPointConfig tight = a.cfg;
    tight.tol = std::min(tight.tol, 1e-14);
    tight.max_iter = std::max(tight.max_iter, 100000);
    family = [g, tight](double u, Complex z) { return compress_cauchy_fp(g, std::exp(u), z, tight); };
  } else {
    throw CLI::ValidationError("--closed-form", "must be auto, km, bernoulli, orthopoly or none");
  }
  if (s.converged.empty()) {
    s.converged.assign(grid.size(), 1);
    s.iterations.assign(grid.size(), 0);
    for (std::size_t i = 0; i < grid.size(); ++i) s.converged[i] = s.curve.valid[i];
  }
  const std::string cmd = canonical_flags(sub);
  emit_csv(a.c.out, solved_table(s), a.c.seed, cmd);
  if (!a.check_pde.empty()) {
    CsvTable t{{"u", "re_z", "im_z", "residual"}, {}};
    const double u0 = std::log(a.alpha);
    for (double du : {-0.1, 0.0, 0.1})
      for (Complex z : {Complex(0.5, 0.5), Complex(-1.0, 0.3), Complex(2.0, 1.0)})
        t.rows.push_back({u0 + du, z.real(), z.imag(), pde_residual(family, u0 + du, z)});
    write_csv(a.check_pde, t, a.c.seed, cmd);
  }
  return solver_status(s.failures(), s.curve.size());
}

// sample ---------------------------------------------------------------------

struct SampleArgs {
  Common c;
  std::string model = "chain", diag = "gaussian", hist, hist_grid, block = "permutation";
  int N = 2000;
  double J = 1.0, gamma = 1.5, sigma = 0.0, block_alpha = 0.0;
  int realizations = 1;
  std::size_t bins = 200;
};

int run_sample(const CLI::App& sub, const SampleArgs& a) {
  if (a.N < 2) throw CLI::ValidationError("--N", "must be >= 2");
  HamiltonianSpec spec;
  spec.n = std::size_t(a.N);
  spec.seed = a.c.seed;
  if (a.model == "anderson") {
    DiagDist d;
    if (a.diag == "gaussian") d = DiagDist::gaussian(a.sigma > 0 ? a.sigma : 1.0);
    else if (a.diag == "semicircle") d = DiagDist::semicircle(a.sigma > 0 ? a.sigma * a.sigma : 1.0);
    else throw CLI::ValidationError("--diag", "must be gaussian or semicircle");
    spec.model = AndersonTridiag{a.J, d};
  } else if (a.model == "rp") {
    spec.model = RosenzweigPorter{a.gamma, a.sigma > 0 ? a.sigma : std::sqrt(4.0 / a.N)};
  } else if (a.model == "goe") {
    spec.model = Goe{};
  } else if (a.model == "chain") {
    spec.model = TridiagChain{a.J};
  } else {
    throw CLI::ValidationError("--model", "must be anderson, rp, goe or chain");
  }
  SpectrumFn fn;
  if (a.block_alpha > 0.0) {
    const double alpha = a.block_alpha;
    if (a.block == "permutation")
      fn = [alpha](const HamiltonianSample& s, std::uint64_t seed) {
        return permuted_block_spectrum(s, alpha, derive_seed(seed, 1));
      };
    else if (a.block == "haar")
      fn = [alpha](const HamiltonianSample& s, std::uint64_t seed) {
        return haar_block_spectrum(s, alpha, derive_seed(seed, 1));
      };
    else throw CLI::ValidationError("--block", "must be permutation or haar");
  }
  const auto run = run_ensemble(spec, std::size_t(a.realizations), a.c.threads, fn);
  const std::string cmd = canonical_flags(sub);
  if (!a.c.out.empty()) write_spectra(a.c.out, run.spectra);
  if (!a.hist.empty()) {
    const auto grid = a.hist_grid.empty() ? histogram_grid(run.spectra, a.bins) : parse_grid(a.hist_grid);
    const auto h = empirical_density(run.spectra, grid);
    CsvTable t{{"lambda", "density"}, {}};
    for (std::size_t i = 0; i < h.size(); ++i) t.rows.push_back({h.grid[i], h.values[i]});
    write_csv(a.hist, t, a.c.seed, cmd);
  }
  if (a.c.out.empty() && a.hist.empty()) std::cerr << "freespec: nothing written (give --out and/or --hist)\n";
  return kExitOk;
}

// pestimate ------------------------------------------------------------------

struct PestimateArgs {
  Common c;
  std::string a_model = "diag-normal", b_model = "goe";
  int N = 500, realizations = 100;
};

int run_pestimate(const PestimateArgs& a) {
  if (a.N < 2) throw CLI::ValidationError("--N", "must be >= 2");
  const auto est = p_parameter(matrix_model(a.a_model), matrix_model(a.b_model), std::size_t(a.N), a.realizations,
                               a.c.seed, a.c.threads);
  nlohmann::ordered_json j;
  j["p"] = est.p;
  j["stderr"] = est.stderr_p;
  j["m4_native"] = est.m4_native;
  j["m4_classical"] = est.m4_classical;
  j["m4_free"] = est.m4_free;
  const std::string text = j.dump() + "\n";
  if (a.c.out.empty() || a.c.out == "-") {
    std::cout << text;
  } else {
    std::ofstream os(a.c.out, std::ios::binary);
    if (!os) fail(Errc::Io, "cannot open '" + a.c.out + "' for writing");
    os << text;
  }
  return kExitOk;
}

// compare --------------------------------------------------------------------

struct CompareArgs {
  std::string a, b, metric = "l1", window;
  std::optional<double> tol;
};

DensityCurve read_curve(const std::string& path) {
  const auto t = read_csv(path);
  auto col = [&](std::initializer_list<const char*> names) -> std::optional<std::size_t> {
    for (const char* n : names)
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == n) return i;
    return std::nullopt;
  };
  const std::size_t x = col({"lambda"}).value_or(0), y = col({"density"}).value_or(1);
  const auto ok = col({"valid", "converged"});
  if (std::max(x, y) >= t.columns.size()) fail(Errc::Io, "'" + path + "' needs lambda and density columns");
  std::vector<double> g, v;
  std::vector<std::uint8_t> valid;
  for (const auto& r : t.rows) {
    g.push_back(r[x]);
    v.push_back(r[y]);
    valid.push_back(ok ? r[*ok] != 0.0 : 1);
  }
  DensityCurve c(g, v);
  for (std::size_t i = 0; i < c.size(); ++i) c.valid[i] = c.valid[i] && valid[i];
  return c;
}

int run_compare(const CompareArgs& a) {
  std::optional<Window> w;
  if (!a.window.empty()) {
    const auto ws = parse_window(a.window);
    w = Window{ws.lo, ws.hi};
  }
  const double d = curve_distance(read_curve(a.a), read_curve(a.b), parse_metric(a.metric), w);
  std::cout << format_double(d) << "\n";
  if (a.tol && !(d <= *a.tol)) return kExitCompareFail;
  return kExitOk;
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::NoConvergence:
    case Errc::NoConvergenceEig:
    case Errc::LeftUpperHalfPlane:
    case Errc::DenominatorNearZero:
    case Errc::StencilFailure:
      return kExitSolver;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freespec: spectral densities of A + alpha B from free-probability analytics and Monte Carlo"};
  app.name("freespec");
  app.set_version_flag("--version", std::string("freespec ") + FREESPEC_VERSION);
  app.require_subcommand(1);

  InvertArgs inv;
  auto* s_inv = app.add_subcommand("invert", "Density of a catalog measure by Stieltjes inversion");
  add_common(s_inv, inv.c, false);
  s_inv->add_option("--measure", inv.measure, "Measure JSON file, inline JSON, or kind name")->required();
  s_inv->add_option("--grid", inv.grid, "Grid lo:hi:n")->required();
  s_inv->add_option("--eps", inv.eps, "Imaginary offset")->check(CLI::PositiveNumber);
  s_inv->add_flag("--extrapolate", inv.extrapolate, "Richardson step 2 rho_eps - rho_2eps");

  ConvolveArgs conv;
  auto* s_conv = app.add_subcommand("convolve", "Free additive convolution by subordination");
  add_common(s_conv, conv.c, false);
  s_conv->add_option("--a", conv.a, "First measure")->required();
  s_conv->add_option("--b", conv.b, "Second measure")->required();
  s_conv->add_option("--grid", conv.grid, "Grid lo:hi:n")->required();
  s_conv->add_option("--eps", conv.eps, "Imaginary offset (Richardson pair eps, eps/2)")->check(CLI::PositiveNumber);
  solver_options(s_conv, conv.cfg);

  PerturbArgs pert;
  auto* s_pert = app.add_subcommand("perturb", "Perturbative density of A + alpha B");
  add_common(s_pert, pert.c, false);
  s_pert->add_option("--base", pert.base, "Measure of A");
  s_pert->add_option("--kind", pert.kind, "Law of B: semicircle or arcsine");
  s_pert->add_option("--alpha", pert.alpha, "Coupling alpha");
  s_pert->add_option("--order", pert.order, "Order (semicircle 0-2) or series truncation (arcsine 0-3)");
  s_pert->add_option("--grid", pert.grid, "Grid lo:hi:n (presets supply a default)");
  s_pert->add_option("--eps", pert.eps, "Imaginary offset")->check(CLI::PositiveNumber);
  s_pert->add_option("--preset", pert.preset, "anderson-high-j, anderson-low-j, anderson-gaussian or rp");
  s_pert->add_option("--J", pert.J, "Hopping strength for the Anderson presets");
  s_pert->add_option("--sigma", pert.sigma, "Diagonal spread (anderson-gaussian; rp default sqrt(4/N))");
  s_pert->add_option("--gamma", pert.gamma, "RP exponent");
  s_pert->add_option("--N", pert.N, "Matrix size (rp)");

  CompressArgs comp;
  auto* s_comp = app.add_subcommand("compress", "Free compression (alpha < 1) or decompression (alpha > 1)");
  add_common(s_comp, comp.c, false);
  s_comp->add_option("--measure", comp.measure, "Measure")->required();
  s_comp->add_option("--alpha", comp.alpha, "Compression parameter")->required()->check(CLI::PositiveNumber);
  s_comp->add_option("--closed-form", comp.closed, "auto, km, bernoulli, orthopoly or none (fixed point)");
  s_comp->add_option("--grid", comp.grid, "Grid lo:hi:n")->required();
  s_comp->add_option("--eps", comp.eps, "Imaginary offset for inversion")->check(CLI::PositiveNumber);
  s_comp->add_option("--check-pde", comp.check_pde, "Write PDE residuals (u,re_z,im_z,residual) to this CSV");
  solver_options(s_comp, comp.cfg);

  SampleArgs samp;
  auto* s_samp = app.add_subcommand("sample", "Monte Carlo spectra");
  add_common(s_samp, samp.c, true, "Binary spectra file");
  s_samp->add_option("--model", samp.model, "anderson, rp, goe or chain");
  s_samp->add_option("--N", samp.N, "Matrix size");
  s_samp->add_option("--J", samp.J, "Hopping strength (anderson, chain)");
  s_samp->add_option("--gamma", samp.gamma, "RP exponent");
  s_samp->add_option("--sigma", samp.sigma, "Diagonal spread (anderson: sigma or sqrt variance; rp default sqrt(4/N))");
  s_samp->add_option("--diag", samp.diag, "Anderson diagonal law: gaussian or semicircle");
  s_samp->add_option("--realizations", samp.realizations, "Number of realizations")->check(CLI::PositiveNumber);
  s_samp->add_option("--hist", samp.hist, "Histogram CSV output");
  s_samp->add_option("--hist-grid", samp.hist_grid, "Histogram bin centres lo:hi:n");
  s_samp->add_option("--bins", samp.bins, "Default bin count over the padded pooled range");
  s_samp->add_option("--block-alpha", samp.block_alpha, "Keep the top-left ceil(alpha N) block of a rotated sample");
  s_samp->add_option("--block", samp.block, "Block rotation: permutation or haar");

  PestimateArgs pest;
  auto* s_pest = app.add_subcommand("pestimate", "Fourth-moment matching parameter p");
  add_common(s_pest, pest.c, true, "Output JSON ('-' or omitted: stdout)");
  s_pest->add_option("--a-model", pest.a_model, "diag-normal, perm-diag-normal, goe or identity");
  s_pest->add_option("--b-model", pest.b_model, "diag-normal, perm-diag-normal, goe or identity");
  s_pest->add_option("--N", pest.N, "Matrix size");
  s_pest->add_option("--realizations", pest.realizations, "Number of realizations (>= 10)");

  CompareArgs cmp;
  auto* s_cmp = app.add_subcommand("compare", "Distance between two density CSVs");
  s_cmp->add_option("--a", cmp.a, "Reference curve CSV")->required();
  s_cmp->add_option("--b", cmp.b, "Curve CSV, resampled onto the reference grid")->required();
  s_cmp->add_option("--metric", cmp.metric, "l1, ks or linf");
  s_cmp->add_option("--window", cmp.window, "Comparison window lo:hi");
  s_cmp->add_option("--tol", cmp.tol, "Exit 3 when the distance exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s_inv) return run_invert(*s_inv, inv);
    if (*s_conv) return run_convolve(*s_conv, conv);
    if (*s_pert) return run_perturb(*s_pert, pert);
    if (*s_comp) return run_compress(*s_comp, comp);
    if (*s_samp) return run_sample(*s_samp, samp);
    if (*s_pest) return run_pestimate(pest);
    if (*s_cmp) return run_compare(cmp);
  } catch (const CLI::ParseError& e) {
    std::cerr << "freespec: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoConvergenceError& e) {
    std::cerr << "freespec: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "freespec: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "freespec: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
