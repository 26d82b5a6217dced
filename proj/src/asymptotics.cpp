#include "degen/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace degen {

double lambda_of(double c) { return 2.0 * std::exp(-c); }

double mu_of(double c, double q_inf) {
  if (!(q_inf >= 0.0 && q_inf <= 1.0))
    throw std::out_of_range("mu_of: q_inf must lie in [0, 1]");
  return (1.0 - q_inf) * std::exp(-c);
}

Prediction predict_distinct(double c, ModelKind model, double q_inf) {
  Prediction out;
  out.model = model;
  out.c = c;
  out.q_inf = model == ModelKind::Sym ? q_inf : 0.0;
  out.lambda_or_mu = model == ModelKind::Sym ? mu_of(c, q_inf) : lambda_of(c);
  out.p_distinct = poisson_pmf(out.lambda_or_mu, 0) + poisson_pmf(out.lambda_or_mu, 1);
  return out;
}

double p_of_n(int n, double c) {
  if (n < 1) throw std::invalid_argument("p_of_n: n must be >= 1");
  return std::clamp((std::log(static_cast<double>(n)) + c) / n, 0.0, 1.0);
}

BigInt integer_binomial(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("integer_binomial: arguments must be nonnegative");
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

std::pair<BigInt, BigInt> alternating_binomial_identity(int n, int m) {
  if (n < 0 || m < 0)
    throw std::invalid_argument("alternating_binomial_identity: arguments must be nonnegative");
  BigInt lhs = 0;
  for (int k = 0; k <= m; ++k) {
    BigInt term = integer_binomial(n + 1, k);
    if (k % 2 != 0) term = -term;
    lhs += term;
  }
  BigInt rhs = integer_binomial(n, m);
  if (m % 2 != 0) rhs = -rhs;
  return {lhs, rhs};
}

double factorial_moment_from_indicators(const std::map<int, double>& indicator_products, int k) {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  auto it = indicator_products.find(k);
  return it == indicator_products.end() ? 0.0 : it->second;
}

double expected_isolated_asym(int n, double p, int k) {
  if (n < 1) throw std::invalid_argument("expected_isolated_asym: n must be >= 1");
  if (k < 0) throw std::invalid_argument("expected_isolated_asym: k must be nonnegative");
  double sum = 0.0;
  for (int k1 = 0; k1 <= k; ++k1) {
    const int k2 = k - k1;
    if (k1 > n || k2 > n) continue;
    const double ways = integer_binomial(n, k1).get_d() * integer_binomial(n, k2).get_d();
    const double exponent = static_cast<double>(n) * k - static_cast<double>(k1) * k2;
    sum += ways * std::pow(1.0 - p, exponent);
  }
  return sum;
}

double expected_isolated_sym(int n, double p, double q, int k) {
  if (n < 1) throw std::invalid_argument("expected_isolated_sym: n must be >= 1");
  if (k < 0) throw std::invalid_argument("expected_isolated_sym: k must be nonnegative");
  if (k > n) return 0.0;
  const double within = static_cast<double>(k) * (k - 1) / 2.0;
  const double across = static_cast<double>(k) * (n - k);
  return integer_binomial(n, k).get_d() * std::pow(1.0 - q, k) *
         std::pow(1.0 - p, within) * std::pow(1.0 - p, across);
}

double poisson_pmf(double lambda, int x) {
  if (lambda < 0.0) throw std::invalid_argument("poisson_pmf: lambda must be nonnegative");
  if (x < 0) return 0.0;
  if (lambda == 0.0) return x == 0 ? 1.0 : 0.0;
  return std::exp(x * std::log(lambda) - lambda - std::lgamma(static_cast<double>(x) + 1.0));
}

}  // namespace degen
