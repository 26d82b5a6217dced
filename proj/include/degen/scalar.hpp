#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace degen {

using BigInt = mpz_class;
using Rational = mpq_class;  // mpq_class keeps values reduced with positive denominator
using Complex = std::complex<double>;

// Exact complex scalar over Q(i).
struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long v) : re(v), im(0) {}  // NOLINT: implicit like the other scalars
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    Rational n = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool complex_valued = false;
};
template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr bool complex_valued = true;
};
template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool complex_valued = false;
};
template <>
struct scalar_traits<GaussianRational> {
  static constexpr bool exact = true;
  static constexpr bool complex_valued = true;
};

template <class T>
inline constexpr bool is_exact_scalar_v = scalar_traits<T>::exact;

template <class T>
T scalar_from_int(long v) {
  return T(v);
}
template <>
inline double scalar_from_int<double>(long v) {
  return static_cast<double>(v);
}
template <>
inline Complex scalar_from_int<Complex>(long v) {
  return Complex(static_cast<double>(v), 0.0);
}

inline bool scalar_is_zero(double x) { return x == 0.0; }
inline bool scalar_is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
inline bool scalar_is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool scalar_is_zero(const GaussianRational& x) { return x.is_zero(); }

inline double scalar_abs(double x) { return std::fabs(x); }
inline double scalar_abs(const Complex& x) { return std::abs(x); }
inline double scalar_abs(const Rational& x) { return std::fabs(x.get_d()); }
inline double scalar_abs(const GaussianRational& x) {
  return std::hypot(x.re.get_d(), x.im.get_d());
}

// Exact: doubles are dyadic rationals.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("rational_from_double: non-finite value");
  return Rational(x);
}

// Accepts "p/q", integers, and decimal/scientific forms ("0.25", "-1.5e-3"),
// all converted exactly.
Rational parse_rational(const std::string& s);

// "p/q", or just "p" when the denominator is 1.
std::string rational_to_string(const Rational& x);

}  // namespace degen
