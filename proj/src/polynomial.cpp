#include "degen/polynomial.hpp"

#include <cctype>

namespace degen {

namespace {

// ---- floating determinant: LU with partial pivoting ----

template <class T>
T lu_det(Matrix<T>& a) {
  const int n = a.rows();
  if (n == 0) return T(1);
  T det = T(1);
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = scalar_abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double m = scalar_abs(a(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (best == 0.0) return T(0);
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      T f = a(i, k) / a(k, k);
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    det = det * a(k, k);
  }
  return sign < 0 ? -det : det;
}

// ---- exact determinant: Bareiss over a ring with exact division ----

BigInt checked_div(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (sgn(r) != 0) throw std::logic_error("Bareiss: inexact division");
  return q;
}

struct GaussInt {
  BigInt re, im;
  GaussInt() : re(0), im(0) {}
  explicit GaussInt(long v) : re(v), im(0) {}
  GaussInt(BigInt r, BigInt i) : re(std::move(r)), im(std::move(i)) {}
  friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussInt operator-(const GaussInt& a, const GaussInt& b) {
    return {a.re - b.re, a.im - b.im};
  }
  GaussInt operator-() const { return {-re, -im}; }
};

bool ring_zero(const BigInt& x) { return sgn(x) == 0; }
bool ring_zero(const GaussInt& x) { return sgn(x.re) == 0 && sgn(x.im) == 0; }

BigInt exact_div(const BigInt& a, const BigInt& b) { return checked_div(a, b); }
GaussInt exact_div(const GaussInt& a, const GaussInt& b) {
  BigInt nb = b.re * b.re + b.im * b.im;
  return {checked_div(a.re * b.re + a.im * b.im, nb),
          checked_div(a.im * b.re - a.re * b.im, nb)};
}

template <class R>
R bareiss_det(Matrix<R>& a) {
  const int n = a.rows();
  if (n == 0) return R(1);
  R prev(1);
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (ring_zero(a(k, k))) {
      int r = -1;
      for (int i = k + 1; i < n; ++i)
        if (!ring_zero(a(i, k))) {
          r = i;
          break;
        }
      if (r < 0) return R(0);
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a(i, j) = exact_div(a(k, k) * a(i, j) - a(i, k) * a(k, j), prev);
    prev = a(k, k);
  }
  R d = a(n - 1, n - 1);
  return sign < 0 ? -d : d;
}

}  // namespace

double determinant(Matrix<double> a) { return lu_det(a); }
Complex determinant(Matrix<Complex> a) { return lu_det(a); }

Rational determinant(Matrix<Rational> a) {
  const int n = a.rows();
  if (n == 0) return Rational(1);
  Matrix<BigInt> m(n, n);
  BigInt scale(1);
  for (int i = 0; i < n; ++i) {
    BigInt l(1);
    for (int j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (int j = 0; j < n; ++j) m(i, j) = a(i, j).get_num() * (l / a(i, j).get_den());
    scale *= l;
  }
  Rational det(bareiss_det(m));
  det /= Rational(scale);
  det.canonicalize();
  return det;
}

GaussianRational determinant(Matrix<GaussianRational> a) {
  const int n = a.rows();
  if (n == 0) return GaussianRational(1);
  Matrix<GaussInt> m(n, n);
  BigInt scale(1);
  for (int i = 0; i < n; ++i) {
    BigInt l(1);
    for (int j = 0; j < n; ++j) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).re.get_den_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).im.get_den_mpz_t());
    }
    for (int j = 0; j < n; ++j)
      m(i, j) = GaussInt(a(i, j).re.get_num() * (l / a(i, j).re.get_den()),
                         a(i, j).im.get_num() * (l / a(i, j).im.get_den()));
    scale *= l;
  }
  GaussInt det = bareiss_det(m);
  Rational re(det.re), im(det.im), s(scale);
  re /= s;
  im /= s;
  re.canonicalize();
  im.canonicalize();
  return {re, im};
}

Rational parse_rational(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) throw std::invalid_argument("parse_rational: empty input");
  std::string t = s.substr(b, e - b + 1);

  if (t.find('/') != std::string::npos) {
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), t.c_str(), 10) != 0)
      throw std::invalid_argument("parse_rational: bad fraction '" + t + "'");
    if (sgn(Rational(q.get_den())) == 0)
      throw std::invalid_argument("parse_rational: zero denominator");
    q.canonicalize();
    return q;
  }

  // decimal/scientific form, converted exactly
  size_t i = 0;
  bool neg = false;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) neg = t[i++] == '-';
  std::string digits;
  long frac_len = 0;
  bool any = false;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
    digits += t[i++];
    any = true;
  }
  if (i < t.size() && t[i] == '.') {
    ++i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      digits += t[i++];
      ++frac_len;
      any = true;
    }
  }
  long exp10 = 0;
  if (any && i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) eneg = t[i++] == '-';
    if (i >= t.size()) throw std::invalid_argument("parse_rational: bad exponent in '" + t + "'");
    long ev = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i])))
      ev = ev * 10 + (t[i++] - '0');
    exp10 = eneg ? -ev : ev;
  }
  if (!any || i != t.size())
    throw std::invalid_argument("parse_rational: bad number '" + t + "'");

  BigInt mant(digits.empty() ? "0" : digits, 10);
  if (neg) mant = -mant;
  long shift = exp10 - frac_len;
  BigInt pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational q;
  if (shift >= 0)
    q = Rational(mant * pow10);
  else
    q = Rational(mant) / Rational(pow10);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace degen
