#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degen/bipartite.hpp"
#include "degen/matrix.hpp"
#include "degen/rng.hpp"
#include "degen/scalar.hpp"

namespace degen {

// Sparse-regime parameters: edge probability p(N) = clamp((log N + c)/N, 0, 1)
// and, for symmetric masks, the N-independent diagonal probability q.
struct SparseRegime {
  double c = 0.0;
  double q = 0.0;

  double p_of_n(int n) const;
};

class Permutation {
 public:
  // images[j] = sigma(j), 0-based; must be a bijection
  explicit Permutation(std::vector<int> images);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int j) const { return images_[j]; }
  const std::vector<int>& images() const { return images_; }

  // canonical decomposition: each cycle starts at its smallest member and
  // cycles are listed by ascending smallest member
  std::vector<std::vector<int>> cycles() const;

 private:
  std::vector<int> images_;
};

// A mask together with a value matrix whose entries vanish off the mask.
// Zeros on mask positions are allowed (a sampled value is almost surely
// nonzero, a constructed witness may place structural zeros).
struct MaskedMatrixSample {
  BipartiteMask mask;
  Matrix<double> values;
};

// Spectrum of sum_j x_j E_{j,sigma(j)}: for each cycle of length l with value
// product P, the l-th roots of P.
std::vector<Complex> permutation_model_spectrum(const Permutation& sigma,
                                                const std::vector<Complex>& x);

// Deterministic all-eigenvalues-distinct realization of an asymmetric mask,
// supported on a perfect matching of G (or of G minus one index, adding a
// simple zero eigenvalue). none iff condition_4_1 fails.
std::optional<MaskedMatrixSample> distinct_witness_for_mask(const BipartiteMask& g);

// Symmetric analog, built cycle-by-cycle from a perfect matching: loops get
// diagonal values, even cycles open into paths, odd cycles keep a small
// closing value chosen by spectral search. none iff the matching criterion
// fails on the symmetric mask.
std::optional<MaskedMatrixSample> symmetric_distinct_witness(const BipartiteMask& g);

// Bernoulli mask draw: asymmetric bits independent with probability p(N);
// symmetric masks draw each unordered off-diagonal pair once with p(N) and
// each diagonal bit with q.
BipartiteMask sample_mask(int n, const SparseRegime& regime, bool symmetric,
                          SplitMix64& rng);

// Fixed-probability variant for enumeration fixtures that bypass the schedule.
BipartiteMask sample_mask(int n, double p, double q, bool symmetric, SplitMix64& rng);

enum class ValueDist { Uniform01, StandardNormal };

// Independent continuous draws on the set bits, zeros elsewhere; symmetric
// masks draw once per unordered pair.
MaskedMatrixSample sample_values(const BipartiteMask& mask, ValueDist dist,
                                 SplitMix64& rng);

enum class DistinctMode { Numeric, Exact };

// Numeric eigenvalues of the sample: real ascending spectrum promoted to
// complex for symmetric masks, general complex spectrum otherwise.
std::vector<Complex> sample_eigenvalues(const MaskedMatrixSample& m);

// Numeric mode: all pairwise eigenvalue gaps exceed tol * (1 + spectral
// scale). Exact mode: the characteristic polynomial over the rationals has no
// multiple root; tol is ignored.
bool eigenvalues_distinct(const MaskedMatrixSample& m, DistinctMode mode,
                          double tol = 1e-8);

// Haar-distributed unitary built as the ordered product of column phases and
// Givens rotations with beta-distributed angles.
Matrix<Complex> haar_unitary(int n, SplitMix64& rng);

// Debug dump: first line n, then n rows of space-separated entries.
std::string matrix_to_text(const Matrix<double>& m);

}  // namespace degen
