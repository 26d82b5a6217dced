#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "degen/asymptotics.hpp"
#include "degen/models.hpp"
#include "degen/rng.hpp"

using namespace degen;

namespace {

// Small exact C(x, k) for the oracles, independent of the library routines.
double choose_d(int x, int k) {
  if (k < 0 || x < 0 || k > x) return 0.0;
  double acc = 1.0;
  for (int i = 0; i < k; ++i) acc = acc * (x - i) / (i + 1);
  return acc;
}

// E C(X, k) for the isolated row/column count of an n x n Bernoulli(p)
// mask, by enumerating all 2^(n^2) masks.
double brute_isolated_moment_asym(int n, double p, int k) {
  const int bits = n * n;
  double total = 0.0;
  for (std::uint64_t code = 0; code < (1ULL << bits); ++code) {
    int x = 0;
    for (int j = 0; j < n; ++j) {
      bool row = false;
      bool col = false;
      for (int l = 0; l < n; ++l) {
        if (code >> (j * n + l) & 1) row = true;
        if (code >> (l * n + j) & 1) col = true;
      }
      x += row ? 0 : 1;
      x += col ? 0 : 1;
    }
    const int edges = std::popcount(code);
    total += std::pow(p, edges) * std::pow(1.0 - p, bits - edges) * choose_d(x, k);
  }
  return total;
}

// Same for the symmetric model: diagonal entries appear with probability q,
// unordered off-diagonal pairs with probability p, and a vertex is isolated
// when nothing touches its row.
double brute_isolated_moment_sym(int n, double p, double q, int k) {
  const int pairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pair_at;
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l) pair_at.push_back({j, l});
  double total = 0.0;
  for (std::uint32_t diag = 0; diag < (1u << n); ++diag) {
    for (std::uint32_t off = 0; off < (1u << pairs); ++off) {
      int x = 0;
      for (int j = 0; j < n; ++j) {
        bool touched = (diag >> j & 1) != 0;
        for (int b = 0; b < pairs && !touched; ++b)
          if ((off >> b & 1) && (pair_at[b].first == j || pair_at[b].second == j)) touched = true;
        x += touched ? 0 : 1;
      }
      const int d = std::popcount(diag);
      const int e = std::popcount(off);
      total += std::pow(q, d) * std::pow(1.0 - q, n - d) * std::pow(p, e) *
               std::pow(1.0 - p, pairs - e) * choose_d(x, k);
    }
  }
  return total;
}

// Summed indicator products for the asymmetric isolated-vertex family:
// S_k = sum over k-subsets I of the 2n row/column indicators of
// P(everything in I is isolated) = (1-p)^(n|rows| + n|cols| - |rows||cols|).
std::map<int, double> isolated_indicator_products(int n, double p) {
  std::map<int, double> s;
  const int m = 2 * n;
  for (std::uint32_t set = 0; set < (1u << m); ++set) {
    const int k1 = std::popcount(set & ((1u << n) - 1));
    const int k2 = std::popcount(set >> n);
    s[k1 + k2] += std::pow(1.0 - p, static_cast<double>(n) * (k1 + k2) - k1 * k2);
  }
  return s;
}

}  // namespace

TEST_CASE("limit means lambda and mu") {
  CHECK(lambda_of(0.0) == 2.0);
  CHECK(lambda_of(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambda_of(50.0) < 1e-20);
  CHECK(lambda_of(-1.0) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));

  CHECK(mu_of(0.0, 0.0) == 1.0);
  for (double c : {-3.0, 0.0, 5.0}) CHECK(mu_of(c, 1.0) == 0.0);
  CHECK(mu_of(0.0, 0.5) == 0.5);
  CHECK(mu_of(1.0, 0.25) == doctest::Approx(0.75 * std::exp(-1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(mu_of(0.0, -0.1), std::out_of_range);
  CHECK_THROWS_AS(mu_of(0.0, 1.1), std::out_of_range);
}

TEST_CASE("predictions at pinned regimes") {
  Prediction a = predict_distinct(0.0, ModelKind::Asym);
  CHECK(a.model == ModelKind::Asym);
  CHECK(a.c == 0.0);
  CHECK(a.lambda_or_mu == 2.0);
  CHECK(a.p_distinct == doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(a.p_distinct == doctest::Approx(0.406006).epsilon(1e-5));

  Prediction s0 = predict_distinct(0.0, ModelKind::Sym, 0.0);
  CHECK(s0.lambda_or_mu == 1.0);
  CHECK(s0.p_distinct == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(s0.p_distinct == doctest::Approx(0.735759).epsilon(1e-5));

  Prediction s5 = predict_distinct(0.0, ModelKind::Sym, 0.5);
  CHECK(s5.lambda_or_mu == 0.5);
  CHECK(s5.q_inf == 0.5);
  CHECK(s5.p_distinct == doctest::Approx(1.5 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(s5.p_distinct == doctest::Approx(0.909796).epsilon(1e-5));

  // q is irrelevant to the asymmetric model and is echoed as 0 there
  CHECK(predict_distinct(0.3, ModelKind::Asym, 0.7).q_inf == 0.0);
  CHECK_THROWS_AS(predict_distinct(0.0, ModelKind::Sym, 2.0), std::out_of_range);
}

TEST_CASE("prediction equals the Poisson mass at 0 and 1") {
  for (double c : {-1.5, -0.25, 0.0, 0.4, 1.0, 3.0, 8.0}) {
    Prediction a = predict_distinct(c, ModelKind::Asym);
    CHECK(a.p_distinct == poisson_pmf(a.lambda_or_mu, 0) + poisson_pmf(a.lambda_or_mu, 1));
    CHECK(a.p_distinct ==
          doctest::Approx(std::exp(-a.lambda_or_mu) * (1.0 + a.lambda_or_mu)).epsilon(1e-14));
    for (double q : {0.0, 0.3, 1.0}) {
      Prediction s = predict_distinct(c, ModelKind::Sym, q);
      CHECK(s.p_distinct == poisson_pmf(s.lambda_or_mu, 0) + poisson_pmf(s.lambda_or_mu, 1));
      CHECK(s.p_distinct ==
            doctest::Approx(std::exp(-s.lambda_or_mu) * (1.0 + s.lambda_or_mu)).epsilon(1e-14));
    }
  }
}

TEST_CASE("edge probability schedule") {
  CHECK(p_of_n(1, 0.0) == 0.0);
  CHECK(p_of_n(3, 0.0) == doctest::Approx(std::log(3.0) / 3.0).epsilon(1e-15));
  CHECK(p_of_n(1, 5.0) == 1.0);
  CHECK(p_of_n(2, -10.0) == 0.0);
  CHECK_THROWS_AS(p_of_n(0, 0.0), std::invalid_argument);

  // the sampling regime uses the same schedule
  for (int n : {1, 2, 7, 1000}) {
    SparseRegime reg{0.3, 0.0};
    CHECK(reg.p_of_n(n) == p_of_n(n, 0.3));
  }
}

TEST_CASE("generalized binomial coefficients") {
  CHECK(gen_binomial(Rational(3), 5) == Rational(0));
  CHECK(gen_binomial(Rational(5), 2) == Rational(10));
  CHECK(gen_binomial(Rational(7), 0) == Rational(1));
  CHECK(gen_binomial(Rational(-2), 0) == Rational(1));
  CHECK(gen_binomial(Rational(1, 2), 2) == Rational(-1, 8));
  CHECK(gen_binomial(Rational(-1), 3) == Rational(-1));
  CHECK(gen_binomial(2.5, 2) == doctest::Approx(1.875).epsilon(1e-15));
  CHECK(gen_binomial(6.0, 3) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK_THROWS_AS(gen_binomial(Rational(3), -1), std::invalid_argument);

  CHECK(integer_binomial(5, 2) == BigInt(10));
  CHECK(integer_binomial(3, 5) == BigInt(0));
  CHECK(integer_binomial(0, 0) == BigInt(1));
  CHECK_THROWS_AS(integer_binomial(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(integer_binomial(2, -3), std::invalid_argument);

  // agreement with the exact integer coefficient on integer arguments
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= 14; ++k)
      CHECK(gen_binomial(Rational(n), k) == Rational(integer_binomial(n, k)));
}

TEST_CASE("alternating binomial identity") {
  auto [l0, r0] = alternating_binomial_identity(5, 0);
  CHECK(l0 == BigInt(1));
  CHECK(r0 == BigInt(1));
  auto [l1, r1] = alternating_binomial_identity(3, 2);
  CHECK(l1 == BigInt(3));
  CHECK(r1 == BigInt(3));
  auto [l2, r2] = alternating_binomial_identity(2, 5);
  CHECK(l2 == BigInt(0));
  CHECK(r2 == BigInt(0));
  CHECK_THROWS_AS(alternating_binomial_identity(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(alternating_binomial_identity(2, -1), std::invalid_argument);

  for (int n = 0; n <= 40; ++n)
    for (int m = 0; m <= 40; ++m) {
      auto [lhs, rhs] = alternating_binomial_identity(n, m);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("Bonferroni bounds at pinned inputs") {
  // X identically 0: every factorial moment beyond order 0 vanishes
  std::vector<double> zero{1.0, 0.0};
  auto [zl, zu] = bonferroni_bounds(zero, 0, 0);
  CHECK(zl == 1.0);
  CHECK(zu == 1.0);

  // X Bernoulli(0.3), mass at 0 is 0.7
  std::vector<double> bern{1.0, 0.3};
  auto [bl, bu] = bonferroni_bounds(bern, 0, 0);
  CHECK(bl == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(bu == 1.0);

  // Poisson(1) moments 1/k!: both bounds squeeze onto P(X=0) = 1/e
  std::vector<double> pois(20, 0.0);
  double fact = 1.0;
  for (int k = 0; k < 20; ++k) {
    if (k > 0) fact *= k;
    pois[k] = 1.0 / fact;
  }
  auto [cl, cu] = bonferroni_bounds(pois, 0, 2);
  CHECK(cl <= std::exp(-1.0));
  CHECK(cu >= std::exp(-1.0));
  CHECK(cu - cl == doctest::Approx(1.0 / 120.0).epsilon(1e-12));
  auto [tl, tu] = bonferroni_bounds(pois, 0, 8);
  CHECK(tl == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(tu == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK(tl <= std::exp(-1.0) + 1e-12);
  CHECK(tu >= std::exp(-1.0) - 1e-12);

  CHECK_THROWS_AS(bonferroni_bounds(bern, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(bonferroni_bounds(bern, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(bonferroni_bounds(bern, -1, 0), std::invalid_argument);
}

TEST_CASE("Bonferroni bounds sandwich exact probabilities") {
  SplitMix64 rng(0xb095f3);
  for (int rep = 0; rep < 10000; ++rep) {
    // random rational distribution on {0..6}
    std::vector<long> w(7);
    long total = 0;
    for (long& v : w) {
      v = static_cast<long>(rng.next() % 10);
      total += v;
    }
    if (total == 0) {
      w[rng.next() % 7] = 1;
      total = 1;
    }
    std::vector<Rational> pmf(7);
    for (int x = 0; x < 7; ++x) pmf[x] = Rational(w[x]) / Rational(total);

    // exact factorial moments through order j + 2*ell + 1
    std::vector<Rational> betas(12, Rational(0));
    for (int k = 0; k < 12; ++k)
      for (int x = 0; x < 7; ++x) betas[k] += gen_binomial(Rational(x), k) * pmf[x];

    const int j = static_cast<int>(rng.next() % 7);
    const int ell = static_cast<int>(rng.next() % 3);
    auto [lo, hi] = bonferroni_bounds(betas, j, ell);
    CHECK(lo <= pmf[j]);
    CHECK(pmf[j] <= hi);
    CHECK(lo <= hi);
  }
}

TEST_CASE("factorial moments from indicator sums") {
  CHECK(factorial_moment_from_indicators({}, 0) == 1.0);
  CHECK(factorial_moment_from_indicators({{1, 0.4}}, 2) == 0.0);
  CHECK(factorial_moment_from_indicators({{1, 0.4}}, -1) == 0.0);

  // independent Bernoulli(p) indicators: S_k = C(m,k) p^k equals E C(X,k)
  const double p = 0.4;
  const int m = 5;
  std::map<int, double> ind;
  for (int k = 1; k <= m; ++k) ind[k] = choose_d(m, k) * std::pow(p, k);
  for (int k = 0; k <= m + 1; ++k) {
    double direct = 0.0;
    for (std::uint32_t o = 0; o < (1u << m); ++o) {
      const int x = std::popcount(o);
      direct += std::pow(p, x) * std::pow(1.0 - p, m - x) * choose_d(x, k);
    }
    CHECK(factorial_moment_from_indicators(ind, k) == doctest::Approx(direct).epsilon(1e-12));
  }

  // two fully correlated indicators: E C(X,2) collapses to p
  std::map<int, double> corr{{1, 2 * 0.35}, {2, 0.35}};
  CHECK(factorial_moment_from_indicators(corr, 2) == doctest::Approx(0.35).epsilon(1e-15));

  // random joint distributions: subset-sum route equals outcome enumeration
  SplitMix64 rng(0xfac7);
  for (int rep = 0; rep < 40; ++rep) {
    const int vars = 3 + static_cast<int>(rng.next() % 6);
    const std::uint32_t outcomes = 1u << vars;
    std::vector<double> weight(outcomes);
    double total = 0.0;
    for (double& v : weight) {
      v = static_cast<double>(rng.next() % 100);
      total += v;
    }
    if (total == 0.0) {
      weight[0] = 1.0;
      total = 1.0;
    }
    for (double& v : weight) v /= total;

    std::map<int, double> products;
    for (std::uint32_t set = 1; set < outcomes; ++set) {
      double e = 0.0;
      for (std::uint32_t o = 0; o < outcomes; ++o)
        if ((o & set) == set) e += weight[o];
      products[std::popcount(set)] += e;
    }
    for (int k = 0; k <= vars; ++k) {
      double direct = 0.0;
      for (std::uint32_t o = 0; o < outcomes; ++o)
        direct += weight[o] * choose_d(std::popcount(o), k);
      CHECK(factorial_moment_from_indicators(products, k) ==
            doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("expected isolated count moments, asymmetric") {
  for (double p : {0.0, 0.37, 1.0})
    CHECK(expected_isolated_asym(1, p, 1) == doctest::Approx(2.0 * (1.0 - p)).epsilon(1e-15));
  for (int k : {1, 2, 5}) CHECK(expected_isolated_asym(4, 1.0, k) == 0.0);
  CHECK(expected_isolated_asym(2, 0.5, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expected_isolated_asym(3, 0.2, 0) == 1.0);
  CHECK_THROWS_AS(expected_isolated_asym(0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(expected_isolated_asym(2, 0.5, -1), std::invalid_argument);

  for (int n = 1; n <= 3; ++n)
    for (double p : {0.3, 0.62})
      for (int k = 0; k <= 2 * n + 1; ++k) {
        const double expect = expected_isolated_asym(n, p, k);
        CHECK(expect == doctest::Approx(brute_isolated_moment_asym(n, p, k)).epsilon(1e-10));
        CHECK(expect ==
              doctest::Approx(factorial_moment_from_indicators(isolated_indicator_products(n, p), k))
                  .epsilon(1e-12));
      }
}

TEST_CASE("expected isolated count moments, symmetric") {
  for (int k : {1, 3}) CHECK(expected_isolated_sym(3, 0.4, 1.0, k) == 0.0);
  for (double p : {0.0, 0.8}) CHECK(expected_isolated_sym(1, p, 0.25, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(expected_isolated_sym(2, 0.5, 0.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(expected_isolated_sym(3, 0.3, 0.2, 0) == 1.0);
  CHECK(expected_isolated_sym(2, 0.3, 0.2, 5) == 0.0);
  CHECK_THROWS_AS(expected_isolated_sym(0, 0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(expected_isolated_sym(2, 0.5, 0.5, -2), std::invalid_argument);

  for (int n = 1; n <= 3; ++n)
    for (double p : {0.3, 0.62})
      for (double q : {0.0, 0.45, 1.0})
        for (int k = 0; k <= n + 1; ++k)
          CHECK(expected_isolated_sym(n, p, q, k) ==
                doctest::Approx(brute_isolated_moment_sym(n, p, q, k)).epsilon(1e-10));
}

TEST_CASE("isolated moments approach the Poisson limit") {
  for (double c : {0.0, 0.7}) {
    const double lambda = lambda_of(c);
    for (int k = 1; k <= 3; ++k) {
      const double target = std::pow(lambda, k) / std::tgamma(k + 1.0);
      double prev = -1.0;
      for (int n : {1000, 10000, 100000}) {
        const double err = std::fabs(expected_isolated_asym(n, p_of_n(n, c), k) / target - 1.0);
        if (prev >= 0.0) CHECK(err < prev);
        prev = err;
        if (n == 100000) CHECK(err < 0.05);
      }
    }
  }
}

TEST_CASE("Poisson probability mass") {
  CHECK(poisson_pmf(0.0, 0) == 1.0);
  CHECK(poisson_pmf(0.0, 3) == 0.0);
  CHECK(poisson_pmf(2.0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(poisson_pmf(2.0, 1) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(poisson_pmf(3.0, -1) == 0.0);
  CHECK_THROWS_AS(poisson_pmf(-0.5, 0), std::invalid_argument);

  double sum = 0.0;
  for (int x = 0; x <= 60; ++x) sum += poisson_pmf(3.0, x);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // matches the direct formula where the factorial stays representable
  for (double lambda : {0.5, 2.0, 7.0}) {
    double fact = 1.0;
    for (int x = 0; x <= 20; ++x) {
      if (x > 0) fact *= x;
      CHECK(poisson_pmf(lambda, x) ==
            doctest::Approx(std::exp(-lambda) * std::pow(lambda, x) / fact).epsilon(1e-12));
    }
  }
}
