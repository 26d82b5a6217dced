#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace degen {

// N x N bipartite adjacency between row-vertices and column-vertices, kept as
// row bitsets. Doubles as a matrix sparsity pattern. When the symmetric flag
// is set, bit (j,l) == bit (l,j) is maintained by construction and the two
// vertex sets are treated as one identified index space.
class BipartiteMask {
 public:
  explicit BipartiteMask(int n, bool symmetric = false);

  int n() const { return n_; }
  bool symmetric() const { return symmetric_; }
  int words() const { return words_; }

  bool test(int j, int l) const {
    return (bits_[static_cast<size_t>(j) * words_ + (l >> 6)] >> (l & 63)) & 1u;
  }
  // Mirrors (l,j) automatically on symmetric masks.
  void set(int j, int l, bool value = true);

  const std::uint64_t* row(int j) const { return &bits_[static_cast<size_t>(j) * words_]; }
  bool row_empty(int j) const;
  int row_degree(int j) const;
  int edge_count() const;

  BipartiteMask transposed() const;

  // Text fixture format: "n" or "n sym", then n lines of n characters {0,1}.
  static BipartiteMask parse_text(const std::string& text);
  std::string to_text() const;

  friend bool operator==(const BipartiteMask& a, const BipartiteMask& b) {
    return a.n_ == b.n_ && a.symmetric_ == b.symmetric_ && a.bits_ == b.bits_;
  }

 private:
  int n_ = 0;
  int words_ = 0;
  bool symmetric_ = false;
  std::vector<std::uint64_t> bits_;
};

// Calls f(l) for every set bit l of row j, ascending.
template <class F>
void for_each_row_bit(const BipartiteMask& g, int j, F f) {
  const std::uint64_t* r = g.row(j);
  for (int w = 0; w < g.words(); ++w) {
    std::uint64_t word = r[w];
    while (word) {
      f((w << 6) + std::countr_zero(word));
      word &= word - 1;
    }
  }
}

struct Matching {
  int size = 0;
  std::vector<int> left_to_right, right_to_left;  // -1 where unmatched
};

enum class Side { Left, Right };

// Hopcroft-Karp over the row bitsets; deterministic for a fixed mask.
Matching maximum_matching(const BipartiteMask& g);
// Same, with one vertex removed from each side (-1 = keep all). A perfect
// matching of the reduced graph has size n-1.
Matching maximum_matching_excluding(const BipartiteMask& g, int skip_left, int skip_right);
bool has_perfect_matching(const BipartiteMask& g);

// Gamma_G(A) on the opposite side.
std::vector<int> neighborhood(const BipartiteMask& g, const std::vector<int>& a, Side side);
// Identified-space neighborhood of a symmetric mask (loops included).
std::vector<int> tilde_neighborhood(const BipartiteMask& g, const std::vector<int>& a);

struct IsolatedPoints {
  std::vector<int> left, right;  // equal sets on symmetric masks
};
IsolatedPoints isolated_points(const BipartiteMask& g);

// G[S]: both sides restricted to S, reindexed by ascending S order.
BipartiteMask principal_subgraph(const BipartiteMask& g, const std::vector<int>& s);

// True iff G or some G[{0..n-1} - {j}] has a perfect matching. The
// certificate records which case held and the matching that proves it.
struct MatchingCertificate {
  bool satisfied = false;
  int removed = -1;   // -1: G itself has a perfect matching
  Matching matching;  // the proving matching (over original indices)
};
MatchingCertificate condition_4_1_certificate(const BipartiteMask& g);
bool condition_4_1(const BipartiteMask& g);

struct DeficiencyWitness {
  enum class Kind { Left, Right, Identified };
  Kind side = Kind::Left;
  std::vector<int> I;      // violating set, |Gamma(I)| <= |I| - 1
  std::vector<int> gamma;  // its neighborhood (tilde neighborhood when Identified)
};
// none iff G has a perfect matching. Exhaustive mode (n <= 12) returns the
// minimum-cardinality violator over both sides, smallest size first, left
// before right, lexicographically smallest set; non-exhaustive mode grows a
// violator by alternating-path reachability from an unmatched vertex.
std::optional<DeficiencyWitness> hall_violation_witness(const BipartiteMask& g,
                                                        bool exhaustive);

// Structural no-matching witnesses found by exhaustive subset search, n <= 12.
struct StructuralWitness {
  int k = 0;
  DeficiencyWitness::Kind side = DeficiencyWitness::Kind::Left;
  std::vector<int> I;  // |I| = k
  std::vector<int> J;  // the neighborhood, |J| = k-1, every member with >= 2 edges into I
};
std::optional<StructuralWitness> condition_4_11(const BipartiteMask& g);
// Symmetric analog with tilde neighborhoods and I, J disjoint.
std::optional<StructuralWitness> condition_5_3(const BipartiteMask& g);

}  // namespace degen
