#include "degen/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "degen/asymptotics.hpp"
#include "degen/eigen.hpp"
#include "degen/polynomial.hpp"

namespace degen {

double SparseRegime::p_of_n(int n) const { return degen::p_of_n(n, c); }

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  std::vector<char> seen(n, 0);
  for (int v : images_) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("Permutation: images are not a bijection");
    seen[v] = 1;
  }
}

std::vector<std::vector<int>> Permutation::cycles() const {
  const int n = size();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> out;
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    std::vector<int> cyc;
    for (int u = v; !seen[u]; u = images_[u]) {
      seen[u] = 1;
      cyc.push_back(u);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

std::vector<Complex> permutation_model_spectrum(const Permutation& sigma,
                                                const std::vector<Complex>& x) {
  if (static_cast<int>(x.size()) != sigma.size())
    throw std::invalid_argument("permutation_model_spectrum: |x| != N");
  std::vector<Complex> out;
  out.reserve(x.size());
  for (const auto& cyc : sigma.cycles()) {
    Complex prod = 1.0;
    for (int v : cyc) prod *= x[v];
    const int l = static_cast<int>(cyc.size());
    if (prod == 0.0) {
      out.insert(out.end(), l, Complex(0.0));
      continue;
    }
    const double rho = std::pow(std::abs(prod), 1.0 / l);
    const double theta = std::arg(prod);
    for (int k = 0; k < l; ++k)
      out.push_back(std::polar(rho, (theta + 2.0 * std::numbers::pi * k) / l));
  }
  return out;
}

namespace {

// Witness values on the permutation sigma of a size-m instance: the c-th
// canonical cycle carries product r_c = c*m + 1 on its first edge and 1 on
// the rest, so cycle root moduli (c*m+1)^(1/l_c) never coincide. map embeds
// instance indices into the host matrix.
void fill_witness_values(Matrix<double>& vals, const std::vector<int>& l2r,
                         const std::vector<int>& map) {
  const int m = static_cast<int>(l2r.size());
  Permutation sigma(l2r);
  const auto cycles = sigma.cycles();
  for (size_t c = 0; c < cycles.size(); ++c) {
    const auto& cyc = cycles[c];
    for (size_t i = 0; i < cyc.size(); ++i) {
      int v = cyc[i];
      vals(map[v], map[sigma(v)]) =
          i == 0 ? static_cast<double>((c + 1) * static_cast<size_t>(m) + 1) : 1.0;
    }
  }
}

std::vector<int> identity_map(int n) {
  std::vector<int> id(n);
  for (int j = 0; j < n; ++j) id[j] = j;
  return id;
}

std::vector<int> complement_of(int n, int removed) {
  std::vector<int> keep;
  keep.reserve(n - 1);
  for (int j = 0; j < n; ++j)
    if (j != removed) keep.push_back(j);
  return keep;
}

}  // namespace

std::optional<MaskedMatrixSample> distinct_witness_for_mask(const BipartiteMask& g) {
  if (g.symmetric())
    throw std::invalid_argument("distinct_witness_for_mask: asymmetric masks only");
  MatchingCertificate cert = condition_4_1_certificate(g);
  if (!cert.satisfied) return std::nullopt;
  const int n = g.n();
  Matrix<double> vals(n, n);
  if (cert.removed < 0) {
    fill_witness_values(vals, cert.matching.left_to_right, identity_map(n));
  } else {
    std::vector<int> keep = complement_of(n, cert.removed);
    Matching mm = maximum_matching(principal_subgraph(g, keep));
    fill_witness_values(vals, mm.left_to_right, keep);
  }
  MaskedMatrixSample out{g, std::move(vals)};
  if (!eigenvalues_distinct(out, DistinctMode::Numeric))
    throw std::logic_error("distinct_witness_for_mask: verification failed");
  return out;
}

namespace {

// x is the value on the unordered pair {u,v}: matrix entries x/2 on both
// positions, or x itself on a loop.
void set_pair(Matrix<double>& vals, int u, int v, double x) {
  if (u == v) {
    vals(u, u) = x;
  } else {
    vals(u, v) = 0.5 * x;
    vals(v, u) = 0.5 * x;
  }
}

// Unit-scale odd cycle of length l: a path of ones closed by eps. The open
// path has spectrum cos(k*pi/(l+1)) with one exact zero; the first
// eps = 2^-k whose closed spectrum keeps all gaps above 1e-6 and all
// magnitudes above 1e-9 is kept.
double accepted_odd_closing(int l) {
  for (int k = 1; k <= 40; ++k) {
    const double eps = std::ldexp(1.0, -k);
    Matrix<double> b(l, l);
    for (int i = 0; i + 1 < l; ++i) {
      b(i, i + 1) = 0.5;
      b(i + 1, i) = 0.5;
    }
    b(0, l - 1) = 0.5 * eps;
    b(l - 1, 0) = 0.5 * eps;
    std::vector<double> ev = symmetric_eigenvalues(b);
    double min_gap = std::numeric_limits<double>::infinity();
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < l; ++i) {
      min_abs = std::min(min_abs, std::abs(ev[i]));
      if (i + 1 < l) min_gap = std::min(min_gap, ev[i + 1] - ev[i]);
    }
    if (min_gap > 1e-6 && min_abs > 1e-9) return eps;
  }
  throw std::logic_error("symmetric witness: no acceptable closing value");
}

// Per-cycle symmetric values at scale s_c: loops become diagonal entries,
// 2-cycles a single pair, longer cycles a path along the cycle order; odd
// cycles add the closing pair at s_c * eps, even cycles leave it zero. The
// attempt index perturbs the scales when block spectra collide across cycles.
void fill_symmetric_values(Matrix<double>& vals, const std::vector<int>& l2r,
                           const std::vector<int>& map, int attempt) {
  Permutation sigma(l2r);
  const auto cycles = sigma.cycles();
  for (size_t ci = 0; ci < cycles.size(); ++ci) {
    const auto& cyc = cycles[ci];
    const int l = static_cast<int>(cyc.size());
    const double c = static_cast<double>(ci + 1);
    const double s = 1.0 + c / 10.0 + attempt * c * c / 1000.0;
    if (l == 1) {
      vals(map[cyc[0]], map[cyc[0]]) = s;
    } else if (l == 2) {
      set_pair(vals, map[cyc[0]], map[cyc[1]], s);
    } else {
      for (int i = 0; i + 1 < l; ++i) set_pair(vals, map[cyc[i]], map[cyc[i + 1]], s);
      if (l % 2 == 1) set_pair(vals, map[cyc[0]], map[cyc[l - 1]], s * accepted_odd_closing(l));
    }
  }
}

}  // namespace

std::optional<MaskedMatrixSample> symmetric_distinct_witness(const BipartiteMask& g) {
  if (!g.symmetric())
    throw std::invalid_argument("symmetric_distinct_witness: symmetric masks only");
  MatchingCertificate cert = condition_4_1_certificate(g);
  if (!cert.satisfied) return std::nullopt;
  const int n = g.n();
  for (int attempt = 0; attempt < 32; ++attempt) {
    Matrix<double> vals(n, n);
    if (cert.removed < 0) {
      fill_symmetric_values(vals, cert.matching.left_to_right, identity_map(n), attempt);
    } else {
      std::vector<int> keep = complement_of(n, cert.removed);
      Matching mm = maximum_matching(principal_subgraph(g, keep));
      fill_symmetric_values(vals, mm.left_to_right, keep, attempt);
    }
    MaskedMatrixSample out{g, std::move(vals)};
    if (eigenvalues_distinct(out, DistinctMode::Numeric)) return out;
  }
  throw std::logic_error("symmetric_distinct_witness: no distinct realization found");
}

namespace {

// Visits each slot of [0, total) independently with probability p by
// geometric gaps; one uniform draw per visited slot plus one.
template <class F>
void bernoulli_slots(std::int64_t total, double p, SplitMix64& rng, F f) {
  if (total <= 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::int64_t k = 0; k < total; ++k) f(k);
    return;
  }
  const double denom = std::log1p(-p);
  std::int64_t k = -1;
  while (true) {
    const double gap = std::floor(std::log1p(-rng.uniform01_pos()) / denom);
    if (!(gap < static_cast<double>(total))) break;  // covers +inf
    k += 1 + static_cast<std::int64_t>(gap);
    if (k >= total) break;
    f(k);
  }
}

}  // namespace

BipartiteMask sample_mask(int n, const SparseRegime& regime, bool symmetric,
                          SplitMix64& rng) {
  return sample_mask(n, regime.p_of_n(n), regime.q, symmetric, rng);
}

BipartiteMask sample_mask(int n, double p, double q, bool symmetric, SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("sample_mask: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("sample_mask: probabilities must lie in [0, 1]");
  BipartiteMask g(n, symmetric);
  if (!symmetric) {
    bernoulli_slots(static_cast<std::int64_t>(n) * n, p, rng, [&](std::int64_t k) {
      g.set(static_cast<int>(k / n), static_cast<int>(k % n));
    });
    return g;
  }
  // unordered off-diagonal pairs in row-major upper-triangle order, then the
  // diagonal with probability q
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  int row = 0;
  std::int64_t row_start = 0;
  bernoulli_slots(pairs, p, rng, [&](std::int64_t k) {
    while (k >= row_start + (n - 1 - row)) {
      row_start += n - 1 - row;
      ++row;
    }
    g.set(row, row + 1 + static_cast<int>(k - row_start));
  });
  bernoulli_slots(n, q, rng,
                  [&](std::int64_t j) { g.set(static_cast<int>(j), static_cast<int>(j)); });
  return g;
}

MaskedMatrixSample sample_values(const BipartiteMask& mask, ValueDist dist,
                                 SplitMix64& rng) {
  const int n = mask.n();
  Matrix<double> vals(n, n);
  auto draw = [&] {
    return dist == ValueDist::Uniform01 ? rng.uniform01_pos() : rng.standard_normal();
  };
  for (int j = 0; j < n; ++j) {
    for_each_row_bit(mask, j, [&](int l) {
      if (mask.symmetric()) {
        if (l < j) return;  // value was drawn at the mirrored position
        const double v = draw();
        vals(j, l) = v;
        vals(l, j) = v;
      } else {
        vals(j, l) = draw();
      }
    });
  }
  return {mask, std::move(vals)};
}

std::vector<Complex> sample_eigenvalues(const MaskedMatrixSample& m) {
  if (m.mask.symmetric()) {
    std::vector<double> ev = symmetric_eigenvalues(m.values);
    return std::vector<Complex>(ev.begin(), ev.end());
  }
  return general_eigenvalues(m.values);
}

namespace {

// Closest pair of complex points: sort by real part, then only compare pairs
// whose real gap could still beat the best distance.
double min_pairwise_gap(std::vector<Complex> ev) {
  const int n = static_cast<int>(ev.size());
  if (n < 2) return std::numeric_limits<double>::infinity();
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n && best > 0.0; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (ev[j].real() - ev[i].real() >= best) break;
      best = std::min(best, std::abs(ev[j] - ev[i]));
    }
  }
  return best;
}

}  // namespace

bool eigenvalues_distinct(const MaskedMatrixSample& m, DistinctMode mode, double tol) {
  if (mode == DistinctMode::Exact) {
    const int n = m.values.rows();
    Matrix<Rational> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rational_from_double(m.values(i, j));
    return !has_multiple_root(characteristic_polynomial(a));
  }
  if (tol < 0) throw std::invalid_argument("eigenvalues_distinct: tol must be >= 0");
  std::vector<Complex> ev = sample_eigenvalues(m);
  double scale = 0.0;
  for (const Complex& v : ev) scale = std::max(scale, std::abs(v));
  return min_pairwise_gap(std::move(ev)) > tol * (1.0 + scale);
}

Matrix<Complex> haar_unitary(int n, SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
  Matrix<Complex> u = Matrix<Complex>::identity(n);
  const double two_pi = 2.0 * std::numbers::pi;
  auto scale_col = [&](int l, double t) {
    const Complex ph = std::polar(1.0, t);
    for (int r = 0; r < n; ++r) u(r, l) *= ph;
  };
  // ordered product of phase-then-rotation factors, pairs (j,l) ascending,
  // followed by the diagonal phases; right-multiplication acts on columns
  for (int j = 0; j + 1 < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      scale_col(l, two_pi * rng.uniform01());
      const double x = std::acos(std::pow(rng.uniform01(), 1.0 / (2.0 * (l - j))));
      const double cs = std::cos(x), sn = std::sin(x);
      for (int r = 0; r < n; ++r) {
        const Complex a = u(r, j), b = u(r, l);
        u(r, j) = cs * a - sn * b;
        u(r, l) = sn * a + cs * b;
      }
    }
  }
  for (int j = 0; j < n; ++j) scale_col(j, two_pi * rng.uniform01());
  return u;
}

std::string matrix_to_text(const Matrix<double>& m) {
  std::ostringstream out;
  out.precision(17);
  out << m.rows() << '\n';
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m(r, c);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace degen
