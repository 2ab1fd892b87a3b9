#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace freespec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

class Measure;

struct Semicircle {
  double variance = 1.0;
};
struct Arcsine {};
struct KestenMcKay {
  double eta = 2.0;
};
struct Bernoulli {};
struct Gaussian {
  double sigma = 1.0;
};
/// Orthogonal-polynomial measure with constant recursion coefficients a, b.
struct OrthoPoly {
  double a = 0.0;
  double b = 1.0;
};
struct Dirac {
  double c = 0.0;
};
/// Law of s*X + t with X distributed by `base`.
struct Affine {
  double scale = 1.0;
  double shift = 0.0;
  std::shared_ptr<const Measure> base;
};

/// A catalog spectral measure with closed-form transforms.
class Measure {
 public:
  using Kind = std::variant<Semicircle, Arcsine, KestenMcKay, Bernoulli, Gaussian, OrthoPoly, Dirac, Affine>;

  static Measure semicircle(double variance = 1.0);
  static Measure arcsine();
  static Measure kesten_mckay(double eta);
  static Measure bernoulli();
  static Measure gaussian(double sigma = 1.0);
  static Measure orthopoly(double a, double b);
  static Measure dirac(double c);
  static Measure affine(double scale, double shift, const Measure& base);

  const Kind& kind() const { return kind_; }
  /// JSON kind tag: "semicircle", "arcsine", ...
  std::string name() const;

  /// Closure of the support; the Gaussian is truncated at +-12 sigma.
  Interval support() const;
  /// Point masses; empty for purely continuous measures.
  std::vector<Atom> atoms() const;
  /// Mass carried by the absolutely continuous part.
  double continuous_mass() const;
  bool purely_atomic() const { return continuous_mass() == 0.0; }

  double mean() const;
  double variance() const;

 private:
  explicit Measure(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

}  // namespace freespec
