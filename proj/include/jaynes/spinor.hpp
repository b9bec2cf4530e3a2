#pragma once

// Flat-spacetime gamma matrices (Dirac representation, signature + - - -) and
// the slash operator on plane-wave momenta.  Everything is templated on the
// scalar so the identities can be checked exactly with Rational entries.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "jaynes/core.hpp"

namespace jaynes::spinor {

/// Exact rational with 64-bit parts; throws std::overflow_error instead of
/// wrapping.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num_(n), den_(d) {
    require(d != 0, "rational denominator must be nonzero");
    normalize();
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t l = mul(a.den_ / g, b.den_);
    return Rational(add(mul(a.num_, l / a.den_), mul(b.num_, l / b.den_)), l);
  }
  friend Rational operator-(const Rational& a) { return Rational(mul(a.num_, -1), a.den_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    // Cross-cancel first to keep intermediates small.
    const std::int64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
    const std::int64_t s1 = g1 == 0 ? 1 : g1, s2 = g2 == 0 ? 1 : g2;
    return Rational(mul(a.num_ / s1, b.num_ / s2), mul(a.den_ / s2, b.den_ / s1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    require(b.num_ != 0, "division by zero rational");
    return a * Rational(b.den_, b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = mul(num_, -1);
      den_ = mul(den_, -1);
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

template <class T>
struct Complex {
  T re{};
  T im{};

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const T& s, const Complex& a) { return {s * a.re, s * a.im}; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

template <class T>
using Matrix4 = std::array<std::array<Complex<T>, 4>, 4>;

template <class T>
Matrix4<T> identity4() {
  Matrix4<T> m{};
  for (int i = 0; i < 4; ++i) m[i][i].re = T(1);
  return m;
}

template <class T>
Matrix4<T> operator+(const Matrix4<T>& a, const Matrix4<T>& b) {
  Matrix4<T> c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c[i][j] = a[i][j] + b[i][j];
  return c;
}

template <class T>
Matrix4<T> operator*(const Matrix4<T>& a, const Matrix4<T>& b) {
  Matrix4<T> c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] = c[i][j] + a[i][k] * b[k][j];
  return c;
}

template <class T>
Matrix4<T> operator*(const T& s, const Matrix4<T>& a) {
  Matrix4<T> c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c[i][j] = s * a[i][j];
  return c;
}

template <class T>
struct FourVector {
  std::array<T, 4> k{};

  friend FourVector operator+(const FourVector& a, const FourVector& b) {
    FourVector c;
    for (int m = 0; m < 4; ++m) c.k[m] = a.k[m] + b.k[m];
    return c;
  }
};

/// k0^2 - k1^2 - k2^2 - k3^2
template <class T>
T minkowski_square(const FourVector<T>& v) {
  return v.k[0] * v.k[0] - v.k[1] * v.k[1] - v.k[2] * v.k[2] - v.k[3] * v.k[3];
}

template <class T>
struct GammaSet {
  std::array<Matrix4<T>, 4> matrices{};
  std::array<int, 4> signature{1, -1, -1, -1};
};

/// Dirac representation: gamma^0 = diag(1, 1, -1, -1), gamma^k = [[0, s_k], [-s_k, 0]].
template <class T = Rational>
GammaSet<T> build_gamma() {
  using C = Complex<T>;
  const C one{T(1), T(0)}, mone{T(-1), T(0)}, i{T(0), T(1)}, mi{T(0), T(-1)};
  // Pauli matrices.
  const std::array<std::array<std::array<C, 2>, 2>, 3> sigma{{
      {{{C{}, one}, {one, C{}}}},
      {{{C{}, mi}, {i, C{}}}},
      {{{one, C{}}, {C{}, mone}}},
  }};
  GammaSet<T> g;
  g.matrices[0][0][0] = one;
  g.matrices[0][1][1] = one;
  g.matrices[0][2][2] = mone;
  g.matrices[0][3][3] = mone;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        g.matrices[k + 1][a][b + 2] = sigma[k][a][b];
        g.matrices[k + 1][a + 2][b] = C{} - sigma[k][a][b];
      }
  return g;
}

/// (1/2)(gamma^m gamma^n + gamma^n gamma^m)
template <class T>
Matrix4<T> half_anticommutator(const GammaSet<T>& g, int m, int n) {
  return T(1) / T(2) * (g.matrices[m] * g.matrices[n] + g.matrices[n] * g.matrices[m]);
}

/// Every entry of the 4x4 table against g_mn I.
template <class T>
bool anticommutators_match_metric(const GammaSet<T>& g) {
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const T expected = m == n ? T(g.signature[m]) : T(0);
      if (!(half_anticommutator(g, m, n) == expected * identity4<T>())) return false;
    }
  return true;
}

/// sum_m gamma^m k_m
template <class T>
Matrix4<T> dirac_slash(const GammaSet<T>& g, const FourVector<T>& v) {
  Matrix4<T> s{};
  for (int m = 0; m < 4; ++m) s = s + v.k[m] * g.matrices[m];
  return s;
}

}  // namespace jaynes::spinor
