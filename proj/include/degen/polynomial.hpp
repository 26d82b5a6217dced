#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include "degen/matrix.hpp"
#include "degen/scalar.hpp"

namespace degen {

// Monic polynomial p(x) = x^n + a_{n-1} x^{n-1} + ... + a_0, n >= 1.
// coeffs holds a_0..a_{n-1}; the leading 1 is implicit, which is what keeps
// the type monic by construction.
template <class T>
struct Polynomial {
  std::vector<T> coeffs;

  explicit Polynomial(std::vector<T> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("Polynomial: degree must be >= 1");
  }

  // Full ascending coefficient list including the leading term; rejects
  // non-monic input.
  static Polynomial from_full_coeffs(const std::vector<T>& full) {
    if (full.size() < 2) throw std::invalid_argument("Polynomial: degree must be >= 1");
    if (!(full.back() == T(1)))
      throw std::invalid_argument("Polynomial: leading coefficient must be 1");
    return Polynomial(std::vector<T>(full.begin(), full.end() - 1));
  }

  int degree() const { return static_cast<int>(coeffs.size()); }
};

template <class T, class X>
X evaluate(const Polynomial<T>& p, const X& x) {
  X acc = X(1);
  for (int k = p.degree() - 1; k >= 0; --k) acc = acc * x + X(p.coeffs[k]);
  return acc;
}

// (2n-1)x(2n-1) layout: rows 0..n-2 carry [1, a_{n-1}, ..., a_0] shifted
// right one column per row; rows n-1..2n-2 carry [n, b_{n-1}, ..., b_1] with
// b_k = k*a_k, also shifted right one column per row.
template <class T>
Matrix<T> build_discriminant_matrix(const Polynomial<T>& p) {
  const int n = p.degree();
  const int m = 2 * n - 1;
  Matrix<T> d(m, m);
  for (int i = 0; i + 1 < n; ++i) {
    d(i, i) = T(1);
    for (int k = 0; k < n; ++k) d(i, i + 1 + k) = p.coeffs[n - 1 - k];
  }
  for (int i = 0; i < n; ++i) {
    int r = n - 1 + i;
    d(r, i) = scalar_from_int<T>(n);
    for (int k = n - 1; k >= 1; --k)
      d(r, i + n - k) = scalar_from_int<T>(k) * p.coeffs[k];
  }
  return d;
}

// Determinant backends. Floating types use LU with partial pivoting; exact
// types use fraction-free Bareiss elimination over big integers after
// clearing denominators (see src/polynomial.cpp), so an exact zero is an
// exact zero.
double determinant(Matrix<double> a);
Complex determinant(Matrix<Complex> a);
Rational determinant(Matrix<Rational> a);
GaussianRational determinant(Matrix<GaussianRational> a);

// (-1)^{n(n-1)/2} det of the matrix above. Degree 1 gives 1, matching the
// empty root-pair product.
template <class T>
T discriminant(const Polynomial<T>& p) {
  T det = determinant(build_discriminant_matrix(p));
  const int n = p.degree();
  return (n * (n - 1) / 2) % 2 ? -det : det;
}

// prod_{j<l} (r_j - r_l)^2
template <class T>
T discriminant_from_roots(const std::vector<T>& roots) {
  if (roots.empty()) throw std::invalid_argument("discriminant_from_roots: empty input");
  T acc = T(1);
  for (size_t j = 0; j < roots.size(); ++j)
    for (size_t l = j + 1; l < roots.size(); ++l) {
      T d = roots[j] - roots[l];
      acc = acc * d * d;
    }
  return acc;
}

// Floating zero-test normalizer: the discriminant is a weighted-degree-(2n-2)
// polynomial in the coefficients, so the threshold scales as
// max(1, max|a_k|)^{2n-2}.
template <class T>
double discriminant_scale(const Polynomial<T>& p) {
  double m = 1.0;
  for (const T& c : p.coeffs) m = std::max(m, scalar_abs(c));
  return std::pow(m, 2 * p.degree() - 2);
}

template <class T>
bool has_multiple_root(const Polynomial<T>& p, double tol = 1e-10) {
  T d = discriminant(p);
  if constexpr (is_exact_scalar_v<T>) {
    (void)tol;
    return scalar_is_zero(d);
  } else {
    if (tol < 0) throw std::invalid_argument("has_multiple_root: tol must be >= 0");
    return scalar_abs(d) <= tol * discriminant_scale(p);
  }
}

namespace detail {

// Exact path: Faddeev-LeVerrier. Only divides by integers, so it stays in
// the scalar's field.
template <class T>
Polynomial<T> charpoly_exact(const Matrix<T>& m) {
  const int n = m.rows();
  std::vector<T> c(n + 1, T(0));
  c[n] = T(1);
  Matrix<T> b = Matrix<T>::identity(n);
  for (int k = 1; k <= n; ++k) {
    Matrix<T> a = m * b;
    T tr = T(0);
    for (int i = 0; i < n; ++i) tr += a(i, i);
    c[n - k] = -tr / scalar_from_int<T>(k);
    b = a;
    for (int i = 0; i < n; ++i) b(i, i) += c[n - k];
  }
  c.pop_back();
  return Polynomial<T>(std::move(c));
}

// Floating path: Householder reduction to upper Hessenberg form, then the
// leading-principal-minor recurrence
//   p_k = (x - h_{kk}) p_{k-1} - sum_i h_{ik} (prod subdiagonals) p_{i-1}.
template <class T>
void hessenberg_reduce(Matrix<T>& h) {
  const int n = h.rows();
  for (int k = 0; k + 2 < n; ++k) {
    std::vector<T> v(n - k - 1);
    for (int i = k + 1; i < n; ++i) v[i - k - 1] = h(i, k);
    double nrm = 0;
    for (const T& x : v) nrm += scalar_abs(x) * scalar_abs(x);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    T alpha;
    double a0 = scalar_abs(v[0]);
    if (a0 == 0.0)
      alpha = T(-nrm);
    else
      alpha = v[0] * T(-nrm / a0);
    v[0] = v[0] - alpha;
    double vnorm2 = 0;
    for (const T& x : v) vnorm2 += scalar_abs(x) * scalar_abs(x);
    if (vnorm2 == 0.0) continue;
    // H <- P H P with P = I - 2 v v* / (v* v)
    auto conj_of = [](const T& x) {
      if constexpr (scalar_traits<T>::complex_valued)
        return std::conj(x);
      else
        return x;
    };
    // left: rows k+1..n-1, all cols
    for (int j = k; j < n; ++j) {
      T dot = T(0);
      for (int i = k + 1; i < n; ++i) dot += conj_of(v[i - k - 1]) * h(i, j);
      dot = dot * T(2.0 / vnorm2);
      for (int i = k + 1; i < n; ++i) h(i, j) = h(i, j) - v[i - k - 1] * dot;
    }
    // right: all rows, cols k+1..n-1
    for (int i = 0; i < n; ++i) {
      T dot = T(0);
      for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[j - k - 1];
      dot = dot * T(2.0 / vnorm2);
      for (int j = k + 1; j < n; ++j) h(i, j) = h(i, j) - dot * conj_of(v[j - k - 1]);
    }
    for (int i = k + 2; i < n; ++i) h(i, k) = T(0);
    h(k + 1, k) = alpha;
  }
}

template <class T>
Polynomial<T> charpoly_floating(Matrix<T> h) {
  const int n = h.rows();
  hessenberg_reduce(h);
  // p[k] has degree k, stored ascending with explicit leading 1
  std::vector<std::vector<T>> p(n + 1);
  p[0] = {T(1)};
  for (int k = 1; k <= n; ++k) {
    std::vector<T> cur(k + 1, T(0));
    // (x - h_{k-1,k-1}) * p[k-1]
    for (int d = 0; d < k; ++d) {
      cur[d + 1] += p[k - 1][d];
      cur[d] -= h(k - 1, k - 1) * p[k - 1][d];
    }
    T subprod = T(1);
    for (int i = k - 1; i >= 1; --i) {
      subprod = subprod * h(i, i - 1);
      T w = h(i - 1, k - 1) * subprod;
      for (int d = 0; d < i; ++d) cur[d] -= w * p[i - 1][d];
    }
    p[k] = std::move(cur);
  }
  p[n].pop_back();
  return Polynomial<T>(std::move(p[n]));
}

}  // namespace detail

// det(xI - M), monic of degree N.
template <class T>
Polynomial<T> characteristic_polynomial(const Matrix<T>& m) {
  if (!m.square() || m.rows() < 1)
    throw std::invalid_argument("characteristic_polynomial: need square N>=1 matrix");
  if constexpr (is_exact_scalar_v<T>)
    return detail::charpoly_exact(m);
  else
    return detail::charpoly_floating(m);
}

}  // namespace degen
