#include "degen/bipartite.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace degen {

namespace {

constexpr int kExhaustiveLimit = 12;

template <class F>
void for_each_bit(const std::uint64_t* row, int words, F f) {
  for (int w = 0; w < words; ++w) {
    std::uint64_t x = row[w];
    while (x) {
      f(w * 64 + std::countr_zero(x));
      x &= x - 1;
    }
  }
}

std::vector<std::uint64_t> to_bitset(const std::vector<int>& idx, int words) {
  std::vector<std::uint64_t> b(words, 0);
  for (int v : idx) b[v >> 6] |= 1ull << (v & 63);
  return b;
}

std::vector<int> to_indices(const std::vector<std::uint64_t>& b) {
  std::vector<int> out;
  for_each_bit(b.data(), static_cast<int>(b.size()), [&](int v) { out.push_back(v); });
  return out;
}

void validate_index_set(const std::vector<int>& a, int n, const char* who) {
  for (int v : a)
    if (v < 0 || v >= n) throw std::out_of_range(std::string(who) + ": index out of range");
}

}  // namespace

BipartiteMask::BipartiteMask(int n, bool symmetric)
    : n_(n), words_((n + 63) / 64), symmetric_(symmetric),
      bits_(static_cast<size_t>(n) * ((n + 63) / 64), 0) {
  // n = 0 is allowed internally so principal_subgraph(G, {}) and the
  // empty-graph matching convention compose; parsed masks require n >= 1.
  if (n < 0) throw std::invalid_argument("BipartiteMask: n must be >= 0");
}

void BipartiteMask::set(int j, int l, bool value) {
  if (j < 0 || j >= n_ || l < 0 || l >= n_)
    throw std::out_of_range("BipartiteMask::set: index out of range");
  auto put = [&](int a, int b) {
    std::uint64_t& w = bits_[static_cast<size_t>(a) * words_ + (b >> 6)];
    if (value)
      w |= 1ull << (b & 63);
    else
      w &= ~(1ull << (b & 63));
  };
  put(j, l);
  if (symmetric_) put(l, j);
}

bool BipartiteMask::row_empty(int j) const {
  const std::uint64_t* r = row(j);
  for (int w = 0; w < words_; ++w)
    if (r[w]) return false;
  return true;
}

int BipartiteMask::row_degree(int j) const {
  const std::uint64_t* r = row(j);
  int c = 0;
  for (int w = 0; w < words_; ++w) c += std::popcount(r[w]);
  return c;
}

int BipartiteMask::edge_count() const {
  int c = 0;
  for (int j = 0; j < n_; ++j) c += row_degree(j);
  return c;
}

BipartiteMask BipartiteMask::transposed() const {
  BipartiteMask t(n_, false);
  for (int j = 0; j < n_; ++j)
    for_each_bit(row(j), words_, [&](int l) { t.set(l, j); });
  t.symmetric_ = symmetric_;
  return t;
}

BipartiteMask BipartiteMask::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("mask parse: empty input");
  std::istringstream hs(header);
  int n = 0;
  std::string flag;
  if (!(hs >> n) || n < 1) throw std::runtime_error("mask parse: bad size line");
  bool sym = false;
  if (hs >> flag) {
    if (flag != "sym") throw std::runtime_error("mask parse: unknown flag '" + flag + "'");
    sym = true;
  }
  BipartiteMask g(n, false);
  for (int j = 0; j < n; ++j) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("mask parse: missing row");
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (static_cast<int>(line.size()) != n)
      throw std::runtime_error("mask parse: row has wrong width");
    for (int l = 0; l < n; ++l) {
      if (line[l] == '1')
        g.set(j, l);
      else if (line[l] != '0')
        throw std::runtime_error("mask parse: row characters must be 0 or 1");
    }
  }
  if (sym) {
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l)
        if (g.test(j, l) != g.test(l, j))
          throw std::runtime_error("mask parse: sym flag on asymmetric bits");
    g.symmetric_ = true;
  }
  return g;
}

std::string BipartiteMask::to_text() const {
  std::string out = std::to_string(n_);
  if (symmetric_) out += " sym";
  out += '\n';
  for (int j = 0; j < n_; ++j) {
    for (int l = 0; l < n_; ++l) out += test(j, l) ? '1' : '0';
    out += '\n';
  }
  return out;
}

// ---- matching ----

namespace {

constexpr int kInf = 1 << 29;

struct HopcroftKarp {
  const BipartiteMask& g;
  int n, words;
  int skip_left, skip_right;
  std::vector<std::uint64_t> allow;  // column mask: skip_right (and tail) cleared
  std::vector<int> match_l, match_r, dist;

  HopcroftKarp(const BipartiteMask& g_, int sl, int sr)
      : g(g_), n(g_.n()), words(g_.words()), skip_left(sl), skip_right(sr),
        allow(words, ~0ull), match_l(n, -1), match_r(n, -1), dist(n) {
    int tail = n & 63;
    if (tail) allow[words - 1] = (1ull << tail) - 1;
    if (skip_right >= 0) allow[skip_right >> 6] &= ~(1ull << (skip_right & 63));
  }

  bool left_active(int u) const { return u != skip_left; }

  template <class F>
  void adj(int u, F f) const {
    const std::uint64_t* r = g.row(u);
    for (int w = 0; w < words; ++w) {
      std::uint64_t x = r[w] & allow[w];
      while (x) {
        f(w * 64 + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }

  bool bfs() {
    std::vector<int> q;
    for (int u = 0; u < n; ++u) {
      if (left_active(u) && match_l[u] < 0) {
        dist[u] = 0;
        q.push_back(u);
      } else {
        dist[u] = kInf;
      }
    }
    bool reached_free = false;
    for (size_t h = 0; h < q.size(); ++h) {
      int u = q[h];
      adj(u, [&](int v) {
        int w = match_r[v];
        if (w < 0) {
          reached_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push_back(w);
        }
      });
    }
    return reached_free;
  }

  bool dfs(int u) {
    bool found = false;
    const std::uint64_t* r = g.row(u);
    for (int w = 0; w < words && !found; ++w) {
      std::uint64_t x = r[w] & allow[w];
      while (x) {
        int v = w * 64 + std::countr_zero(x);
        x &= x - 1;
        int m = match_r[v];
        if (m < 0 || (dist[m] == dist[u] + 1 && dfs(m))) {
          match_l[u] = v;
          match_r[v] = u;
          found = true;
          break;
        }
      }
    }
    if (!found) dist[u] = kInf;
    return found;
  }

  Matching run() {
    // greedy seed
    for (int u = 0; u < n; ++u) {
      if (!left_active(u)) continue;
      const std::uint64_t* r = g.row(u);
      for (int w = 0; w < words && match_l[u] < 0; ++w) {
        std::uint64_t x = r[w] & allow[w];
        while (x) {
          int v = w * 64 + std::countr_zero(x);
          x &= x - 1;
          if (match_r[v] < 0) {
            match_l[u] = v;
            match_r[v] = u;
            break;
          }
        }
      }
    }
    while (bfs()) {
      for (int u = 0; u < n; ++u)
        if (left_active(u) && match_l[u] < 0) dfs(u);
    }
    Matching m;
    m.left_to_right = match_l;
    m.right_to_left = match_r;
    for (int u = 0; u < n; ++u)
      if (match_l[u] >= 0) ++m.size;
    return m;
  }
};

}  // namespace

Matching maximum_matching_excluding(const BipartiteMask& g, int skip_left, int skip_right) {
  return HopcroftKarp(g, skip_left, skip_right).run();
}

Matching maximum_matching(const BipartiteMask& g) {
  return maximum_matching_excluding(g, -1, -1);
}

bool has_perfect_matching(const BipartiteMask& g) {
  return maximum_matching(g).size == g.n();
}

// ---- neighborhoods and isolation ----

std::vector<int> neighborhood(const BipartiteMask& g, const std::vector<int>& a, Side side) {
  validate_index_set(a, g.n(), "neighborhood");
  if (side == Side::Left) {
    std::vector<std::uint64_t> acc(g.words(), 0);
    for (int j : a)
      for (int w = 0; w < g.words(); ++w) acc[w] |= g.row(j)[w];
    return to_indices(acc);
  }
  std::vector<std::uint64_t> abits = to_bitset(a, g.words());
  std::vector<int> out;
  for (int j = 0; j < g.n(); ++j) {
    const std::uint64_t* r = g.row(j);
    for (int w = 0; w < g.words(); ++w)
      if (r[w] & abits[w]) {
        out.push_back(j);
        break;
      }
  }
  return out;
}

std::vector<int> tilde_neighborhood(const BipartiteMask& g, const std::vector<int>& a) {
  if (!g.symmetric())
    throw std::invalid_argument("tilde_neighborhood: requires a symmetric mask");
  return neighborhood(g, a, Side::Left);
}

IsolatedPoints isolated_points(const BipartiteMask& g) {
  IsolatedPoints out;
  std::vector<std::uint64_t> col(g.words(), 0);
  for (int j = 0; j < g.n(); ++j) {
    if (g.row_empty(j)) out.left.push_back(j);
    for (int w = 0; w < g.words(); ++w) col[w] |= g.row(j)[w];
  }
  for (int l = 0; l < g.n(); ++l)
    if (!((col[l >> 6] >> (l & 63)) & 1u)) out.right.push_back(l);
  return out;
}

BipartiteMask principal_subgraph(const BipartiteMask& g, const std::vector<int>& s) {
  validate_index_set(s, g.n(), "principal_subgraph");
  std::vector<int> idx = s;
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  int m = static_cast<int>(idx.size());
  BipartiteMask sub(m, g.symmetric());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (g.test(idx[i], idx[j])) sub.set(i, j);
  return sub;
}

// ---- Condition 4.1 ----

namespace {

// Lefts exposable by some maximum matching: reachable from the exposed left
// vertex along even alternating paths.
std::vector<char> exposable_left(const BipartiteMask& g, const Matching& m, int exposed) {
  std::vector<char> vis(g.n(), 0);
  std::vector<int> q = {exposed};
  vis[exposed] = 1;
  for (size_t h = 0; h < q.size(); ++h) {
    int u = q[h];
    for_each_bit(g.row(u), g.words(), [&](int v) {
      int w = m.right_to_left[v];
      if (w >= 0 && !vis[w]) {
        vis[w] = 1;
        q.push_back(w);
      }
    });
  }
  return vis;
}

}  // namespace

MatchingCertificate condition_4_1_certificate(const BipartiteMask& g) {
  const int n = g.n();
  MatchingCertificate out;

  int zero_rows = 0, zero_cols = 0, jr = -1, jc = -1;
  std::vector<std::uint64_t> col(g.words(), 0);
  for (int j = 0; j < n; ++j) {
    if (g.row_empty(j)) {
      ++zero_rows;
      jr = j;
    }
    for (int w = 0; w < g.words(); ++w) col[w] |= g.row(j)[w];
  }
  for (int l = 0; l < n; ++l)
    if (!((col[l >> 6] >> (l & 63)) & 1u)) {
      ++zero_cols;
      jc = l;
    }

  // Two empty rows (or columns) survive any single removal; one empty row and
  // one empty column survive unless they are the same index.
  if (zero_rows >= 2 || zero_cols >= 2) return out;
  if (zero_rows == 1 && zero_cols == 1 && jr != jc) return out;

  if (zero_rows == 1 || zero_cols == 1) {
    int j = zero_rows == 1 ? jr : jc;
    Matching m = maximum_matching_excluding(g, j, j);
    if (m.size == n - 1) {
      out.satisfied = true;
      out.removed = j;
      out.matching = std::move(m);
    }
    return out;
  }

  Matching m = maximum_matching(g);
  if (m.size == n) {
    out.satisfied = true;
    out.matching = std::move(m);
    return out;
  }
  if (m.size < n - 1) return out;

  // Deficit exactly 1 with no isolated vertex: removing j can only work if
  // some maximum matching exposes left j and some maximum matching exposes
  // right j; both reachability sets come from the one matching at hand.
  int exp_l = -1, exp_r = -1;
  for (int u = 0; u < n; ++u)
    if (m.left_to_right[u] < 0) exp_l = u;
  for (int v = 0; v < n; ++v)
    if (m.right_to_left[v] < 0) exp_r = v;

  std::vector<char> can_l = exposable_left(g, m, exp_l);

  BipartiteMask t = g.transposed();
  Matching mt;
  mt.right_to_left = m.left_to_right;  // transpose swaps the two sides
  std::vector<char> can_r = exposable_left(t, mt, exp_r);

  for (int j = 0; j < n; ++j) {
    if (!can_l[j] || !can_r[j]) continue;
    Matching mj = maximum_matching_excluding(g, j, j);
    if (mj.size == n - 1) {
      out.satisfied = true;
      out.removed = j;
      out.matching = std::move(mj);
      return out;
    }
  }
  return out;
}

bool condition_4_1(const BipartiteMask& g) { return condition_4_1_certificate(g).satisfied; }

// ---- Hall violators ----

namespace {

// ascending combinations of {0..n-1} of size k
struct Combinations {
  int n, k;
  std::vector<int> idx;
  bool first = true;

  Combinations(int n_, int k_) : n(n_), k(k_), idx(k_) {
    for (int i = 0; i < k; ++i) idx[i] = i;
  }

  bool next() {
    if (first) {
      first = false;
      return k <= n;
    }
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  }
};

std::vector<int> gamma_of(const BipartiteMask& g, const std::vector<int>& i_set) {
  std::vector<std::uint64_t> acc(g.words(), 0);
  for (int j : i_set)
    for (int w = 0; w < g.words(); ++w) acc[w] |= g.row(j)[w];
  return to_indices(acc);
}

}  // namespace

std::optional<DeficiencyWitness> hall_violation_witness(const BipartiteMask& g,
                                                        bool exhaustive) {
  const int n = g.n();
  Matching m = maximum_matching(g);
  if (m.size == n) return std::nullopt;

  auto kind_for = [&](Side s) {
    if (g.symmetric()) return DeficiencyWitness::Kind::Identified;
    return s == Side::Left ? DeficiencyWitness::Kind::Left : DeficiencyWitness::Kind::Right;
  };

  if (!exhaustive) {
    int u = -1;
    for (int j = 0; j < n && u < 0; ++j)
      if (m.left_to_right[j] < 0) u = j;
    // grow alternating reachability from the unmatched left vertex; every
    // reached right vertex is matched back into I, so |gamma| = |I| - 1
    std::vector<char> vis_l(n, 0);
    std::vector<std::uint64_t> vis_r(g.words(), 0);
    std::vector<int> q = {u};
    vis_l[u] = 1;
    for (size_t h = 0; h < q.size(); ++h) {
      for_each_bit(g.row(q[h]), g.words(), [&](int v) {
        vis_r[v >> 6] |= 1ull << (v & 63);
        int w = m.right_to_left[v];
        if (w >= 0 && !vis_l[w]) {
          vis_l[w] = 1;
          q.push_back(w);
        }
      });
    }
    DeficiencyWitness out;
    out.side = kind_for(Side::Left);
    for (int j = 0; j < n; ++j)
      if (vis_l[j]) out.I.push_back(j);
    out.gamma = to_indices(vis_r);
    return out;
  }

  if (n > kExhaustiveLimit)
    throw std::length_error("hall_violation_witness: exhaustive mode needs n <= 12");

  BipartiteMask t = g.transposed();
  for (int s = 1; s <= n; ++s) {
    for (Side side : {Side::Left, Side::Right}) {
      if (g.symmetric() && side == Side::Right) continue;  // mirror of Left
      const BipartiteMask& h = side == Side::Left ? g : t;
      Combinations c(n, s);
      while (c.next()) {
        std::vector<int> gam = gamma_of(h, c.idx);
        if (static_cast<int>(gam.size()) < s) {
          DeficiencyWitness out;
          out.side = kind_for(side);
          out.I = c.idx;
          out.gamma = std::move(gam);
          return out;
        }
      }
    }
  }
  return std::nullopt;  // unreachable: no perfect matching implies a violator
}

namespace {

std::optional<StructuralWitness> structural_scan(const BipartiteMask& g, bool tilde_mode) {
  const int n = g.n();
  if (n > kExhaustiveLimit)
    throw std::length_error("structural witness scan needs n <= 12");

  BipartiteMask t = g.transposed();
  for (int k = 2; 2 * k <= n + 1; ++k) {
    for (Side side : {Side::Left, Side::Right}) {
      if (tilde_mode && side == Side::Right) continue;  // identified space
      const BipartiteMask& h = side == Side::Left ? g : t;
      const BipartiteMask& back = side == Side::Left ? t : g;
      Combinations c(n, k);
      while (c.next()) {
        std::vector<int> j_set = gamma_of(h, c.idx);
        if (static_cast<int>(j_set.size()) != k - 1) continue;
        if (tilde_mode) {
          // J must live outside I
          bool overlap = false;
          for (size_t a = 0, b = 0; a < c.idx.size() && b < j_set.size();) {
            if (c.idx[a] == j_set[b]) {
              overlap = true;
              break;
            }
            if (c.idx[a] < j_set[b])
              ++a;
            else
              ++b;
          }
          if (overlap) continue;
        }
        std::vector<std::uint64_t> ibits = to_bitset(c.idx, g.words());
        bool ok = true;
        for (int w : j_set) {
          int deg_in_i = 0;
          const std::uint64_t* r = back.row(w);
          for (int x = 0; x < g.words(); ++x)
            deg_in_i += std::popcount(r[x] & ibits[x]);
          if (deg_in_i < 2) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        StructuralWitness out;
        out.k = k;
        out.side = g.symmetric()
                       ? DeficiencyWitness::Kind::Identified
                       : (side == Side::Left ? DeficiencyWitness::Kind::Left
                                             : DeficiencyWitness::Kind::Right);
        out.I = c.idx;
        out.J = std::move(j_set);
        return out;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<StructuralWitness> condition_4_11(const BipartiteMask& g) {
  return structural_scan(g, false);
}

std::optional<StructuralWitness> condition_5_3(const BipartiteMask& g) {
  if (!g.symmetric()) throw std::invalid_argument("condition_5_3: requires a symmetric mask");
  return structural_scan(g, true);
}

}  // namespace degen
