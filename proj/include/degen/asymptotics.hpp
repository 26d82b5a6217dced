#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "degen/scalar.hpp"

namespace degen {

enum class ModelKind { Asym, Sym };

inline const char* model_kind_name(ModelKind m) {
  return m == ModelKind::Asym ? "asym" : "sym";
}

// Limiting regime summary for one (model, c, q_inf) choice.
struct Prediction {
  ModelKind model = ModelKind::Asym;
  double c = 0.0;
  double q_inf = 0.0;  // unused for the asymmetric model, kept at 0 there
  double lambda_or_mu = 0.0;
  double p_distinct = 0.0;
};

// Limit mean of the isolated-vertex count, asymmetric model.
double lambda_of(double c);

// Limit mean of the identified-isolated-vertex count, symmetric model.
// Throws std::out_of_range unless 0 <= q_inf <= 1.
double mu_of(double c, double q_inf);

// Full limit prediction; p_distinct is the probability that the spectrum
// is simple, computed as P(X <= 1) for X Poisson with the limit mean.
Prediction predict_distinct(double c, ModelKind model, double q_inf = 0.0);

// Edge probability schedule p = (log n + c)/n clamped to [0, 1]; n >= 1.
double p_of_n(int n, double c);

// Exact C(n, k); zero when k > n, throws std::invalid_argument on negative input.
BigInt integer_binomial(int n, int k);

// Generalized binomial x(x-1)...(x-k+1)/k! over any scalar; k >= 0.
template <class T>
T gen_binomial(const T& x, int k) {
  if (k < 0) throw std::invalid_argument("gen_binomial: k must be nonnegative");
  T acc = scalar_from_int<T>(1);
  for (int i = 0; i < k; ++i) acc = acc * (x - scalar_from_int<T>(i));
  for (int i = 2; i <= k; ++i) acc = acc / scalar_from_int<T>(i);
  return acc;
}

// Both sides of sum_{k=0..m} (-1)^k C(n+1,k) = (-1)^m C(n,m), exact.
std::pair<BigInt, BigInt> alternating_binomial_identity(int n, int m);

// Bonferroni inequalities from factorial moments: betas[k] = E C(X,k).
// Returns {lower, upper} with lower <= P(X = j) <= upper where
//   upper = sum_{k=j}^{j+2l}   (-1)^{k-j} C(k,j) betas[k]
//   lower = sum_{k=j}^{j+2l+1} (-1)^{k-j} C(k,j) betas[k].
// Throws std::invalid_argument unless betas reaches index j+2l+1.
template <class T>
std::pair<T, T> bonferroni_bounds(const std::vector<T>& betas, int j, int ell) {
  if (j < 0 || ell < 0) throw std::invalid_argument("bonferroni_bounds: j and ell must be nonnegative");
  const int hi = j + 2 * ell + 1;
  if (static_cast<int>(betas.size()) <= hi)
    throw std::invalid_argument("bonferroni_bounds: need factorial moments through order j+2*ell+1");
  T upper = scalar_from_int<T>(0);
  T lower = scalar_from_int<T>(0);
  for (int k = j; k <= hi; ++k) {
    T term = gen_binomial(scalar_from_int<T>(k), j) * betas[k];
    if ((k - j) % 2 != 0) term = -term;
    if (k < hi) upper += term;
    lower += term;
  }
  return {lower, upper};
}

// E C(X, k) for X a sum of indicator variables, given the per-size sums
// S_k = sum over index sets I of size k of E prod_{j in I} B_j.
// The empty product makes k = 0 always 1; sizes absent from the map are 0.
double factorial_moment_from_indicators(const std::map<int, double>& indicator_products, int k);

// k-th factorial moment E C(X, k) of the isolated row/column count in an
// n x n Bernoulli(p) mask: sum_{k1+k2=k} C(n,k1) C(n,k2) (1-p)^(nk - k1 k2).
double expected_isolated_asym(int n, double p, int k);

// Same for the symmetric model's identified isolated vertices:
// C(n,k) (1-q)^k (1-p)^(k(k-1)/2) (1-p)^(k(n-k)).
double expected_isolated_sym(int n, double p, double q, int k);

// P(X = x) for X Poisson(lambda); zero for x < 0.
double poisson_pmf(double lambda, int x);

}  // namespace degen
