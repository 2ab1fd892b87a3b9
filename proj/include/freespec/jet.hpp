#pragma once

#include <array>
#include <complex>

namespace freespec {

using Complex = std::complex<double>;

/// Truncated Taylor expansion f(z0 + h) = sum_k c[k] h^k, k <= K.
/// Closed-form transforms are written once as templates over the scalar and
/// instantiated with Complex for values and Jet<K> for derivatives.
template <int K>
struct Jet {
  static_assert(K >= 0);
  std::array<Complex, K + 1> c{};

  Jet() = default;
  Jet(Complex v) { c[0] = v; }  // NOLINT(implicit)
  Jet(double v) { c[0] = v; }   // NOLINT(implicit)

  static Jet variable(Complex z0) {
    Jet j(z0);
    if constexpr (K >= 1) j.c[1] = 1.0;
    return j;
  }

  Complex value() const { return c[0]; }

  /// n-th derivative at the expansion point.
  Complex derivative(int n) const {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return c[n] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k <= K; ++k) r.c[k] = -c[k];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= K; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= K; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= K; ++k)
      for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k <= K; ++k) {
      Complex acc = a.c[k];
      for (int j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
      q.c[k] = acc / b.c[0];
    }
    return q;
  }

  friend Jet operator+(Jet a, Complex s) { a.c[0] += s; return a; }
  friend Jet operator+(Complex s, Jet a) { a.c[0] += s; return a; }
  friend Jet operator-(Jet a, Complex s) { a.c[0] -= s; return a; }
  friend Jet operator-(Complex s, const Jet& a) { return Jet(s) - a; }
  friend Jet operator*(Jet a, Complex s) {
    for (auto& x : a.c) x *= s;
    return a;
  }
  friend Jet operator*(Complex s, Jet a) { return a * s; }
  friend Jet operator/(Jet a, Complex s) {
    for (auto& x : a.c) x /= s;
    return a;
  }
  friend Jet operator/(Complex s, const Jet& a) { return Jet(s) / a; }

  friend Jet operator+(const Jet& a, double s) { return a + Complex(s); }
  friend Jet operator+(double s, const Jet& a) { return a + Complex(s); }
  friend Jet operator-(const Jet& a, double s) { return a - Complex(s); }
  friend Jet operator-(double s, const Jet& a) { return Complex(s) - a; }
  friend Jet operator*(const Jet& a, double s) { return a * Complex(s); }
  friend Jet operator*(double s, const Jet& a) { return a * Complex(s); }
  friend Jet operator/(const Jet& a, double s) { return a / Complex(s); }
  friend Jet operator/(double s, const Jet& a) { return Complex(s) / a; }
};

/// Principal square root propagated through the series.
template <int K>
Jet<K> sqrt(const Jet<K>& a) {
  Jet<K> s;
  s.c[0] = std::sqrt(a.c[0]);
  for (int k = 1; k <= K; ++k) {
    Complex acc = a.c[k];
    for (int j = 1; j < k; ++j) acc -= s.c[j] * s.c[k - j];
    s.c[k] = acc / (2.0 * s.c[0]);
  }
  return s;
}

template <int K>
Jet<K> conj(const Jet<K>& a) {
  Jet<K> r;
  for (int k = 0; k <= K; ++k) r.c[k] = std::conj(a.c[k]);
  return r;
}

inline Complex value_of(Complex z) { return z; }
template <int K>
Complex value_of(const Jet<K>& j) { return j.value(); }

}  // namespace freespec
