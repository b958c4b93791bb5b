#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bes/errors.hpp"
#include "bes/group.hpp"
#include "bes/triple_system.hpp"

namespace bes {

// Element sets with P inside A*B such that at least `span` triples
// (a, b, a*b) have a in A, b in B, a*b in P.
struct Witness {
  std::vector<Elem> A;
  std::vector<Elem> B;
  std::vector<Elem> P;
  std::int64_t span = 0;
  std::string variant; // "sqrt" or "k3"
  Elem pullback_ell = 0;
  Elem pullback_r = 0;

  std::int64_t size_total() const {
    return static_cast<std::int64_t>(A.size() + B.size() + P.size());
  }
};

struct GridPattern {
  std::int64_t s1 = 0;
  std::int64_t s2 = 0;
  std::int64_t t = 1;
  std::int64_t h = 1;
};

// Dense bit grid for C subseteq [n]^2.
class BitGrid {
public:
  explicit BitGrid(std::int64_t n, bool fill = false)
      : n_(n), words_((static_cast<std::size_t>(n) * n + 63) / 64,
                      fill ? ~0ull : 0ull) {}

  std::int64_t n() const { return n_; }

  void set(std::int64_t x, std::int64_t y) {
    const std::uint64_t i = idx(x, y);
    words_[i >> 6] |= 1ull << (i & 63);
  }

  bool test(std::int64_t x, std::int64_t y) const {
    const std::uint64_t i = idx(x, y);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

private:
  std::uint64_t idx(std::int64_t x, std::int64_t y) const {
    return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(n_) +
           static_cast<std::uint64_t>(y);
  }

  std::int64_t n_;
  std::vector<std::uint64_t> words_;
};

namespace detail {

// Homothetic-pattern search over a rows x cols window of step t: cells
// (s1 + t*i, s2 + t*j) for i in [1, rows], j in [1, cols]. Increasing t,
// then lexicographic base point; first hit wins.
inline std::optional<GridPattern> pattern_search_rect(
    const BitGrid& C, std::int64_t rows, std::int64_t cols,
    std::uint64_t node_budget) {
  const std::int64_t n = C.n();
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("pattern search: empty pattern");
  const std::int64_t side = std::max(rows, cols);
  if (side > n) return std::nullopt;
  std::uint64_t probes = 0;
  for (std::int64_t t = 1; t * side <= n; ++t) {
    const std::int64_t xmax = n - 1 - t * (rows - 1);
    const std::int64_t ymax = n - 1 - t * (cols - 1);
    for (std::int64_t x0 = 0; x0 <= xmax; ++x0)
      for (std::int64_t y0 = 0; y0 <= ymax; ++y0) {
        bool ok = true;
        for (std::int64_t i = 0; i < rows && ok; ++i)
          for (std::int64_t j = 0; j < cols && ok; ++j) {
            ++probes;
            if (probes > node_budget)
              throw budget_error("pattern search: probe budget exceeded");
            ok = C.test(x0 + t * i, y0 + t * j);
          }
        if (ok) return GridPattern{x0 - t, y0 - t, t, side};
      }
  }
  return std::nullopt;
}

} // namespace detail

// Exhaustive search for s, t with {s + t*(i,j) : i,j in [h]} inside C.
inline std::optional<GridPattern> grid_pattern_search(
    const BitGrid& C, std::int64_t h,
    std::uint64_t node_budget = 2'000'000'000ull) {
  return detail::pattern_search_rect(C, h, h, node_budget);
}

namespace detail {

inline std::vector<Elem> sorted_unique(std::vector<Elem> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Span of the witness on the full grid: pairs of A x B whose product lands
// in P. The pipeline additionally intersects with the target system.
inline std::int64_t grid_span(const GroupSpec& spec, const std::vector<Elem>& A,
                              const std::vector<Elem>& B,
                              const std::vector<Elem>& P) {
  std::unordered_set<Elem> p(P.begin(), P.end());
  std::int64_t c = 0;
  for (Elem a : A)
    for (Elem b : B)
      if (p.count(spec.op(a, b))) ++c;
  return c;
}

} // namespace detail

// Case 1, sqrt variant: A and B arithmetic progressions of length
// ceil(sqrt(k)) with common difference t; P = A + B. Sizes < 4h <= 8 sqrt(k).
inline Witness case1_sqrt(std::int64_t s1, std::int64_t s2, std::int64_t t,
                          std::int64_t k, std::int64_t n) {
  if (k < 3) throw std::invalid_argument("case1_sqrt: k must be >= 3");
  if (t < 1) throw std::invalid_argument("case1_sqrt: t must be >= 1");
  const std::int64_t h =
      static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(k))));
  auto mod = [n](std::int64_t v) { return ((v % n) + n) % n; };
  std::vector<Elem> A, B, P;
  for (std::int64_t i = 1; i <= h; ++i) A.push_back(mod(s1 + t * i));
  for (std::int64_t j = 1; j <= h; ++j) B.push_back(mod(s2 + t * j));
  A = detail::sorted_unique(std::move(A));
  B = detail::sorted_unique(std::move(B));
  for (Elem a : A)
    for (Elem b : B) P.push_back(mod(a + b));
  P = detail::sorted_unique(std::move(P));
  Witness w{A, B, P, 0, "sqrt", 0, 0};
  w.span = detail::grid_span(GroupSpec::cyclic(n), A, B, P);
  return w;
}

// Case 1, k+3 variant: |A| = ceil(k/2), |B| = 2, and P = A + B trimmed by one
// element when k is odd, so |A|+|B|+|P| = k + 3 with span exactly k.
inline Witness case1_k3(std::int64_t s1, std::int64_t s2, std::int64_t t,
                        std::int64_t k, std::int64_t n) {
  if (k < 3) throw std::invalid_argument("case1_k3: k must be >= 3");
  if (t < 1) throw std::invalid_argument("case1_k3: t must be >= 1");
  const std::int64_t h = (k + 1) / 2;
  auto mod = [n](std::int64_t v) { return ((v % n) + n) % n; };
  std::vector<Elem> A, B, P;
  for (std::int64_t i = 1; i <= h; ++i) A.push_back(mod(s1 + t * i));
  B = {mod(s2 + t), mod(s2 + 2 * t)};
  for (std::int64_t i = 1; i <= h; ++i)
    for (std::int64_t j = 1; j <= 2; ++j) P.push_back(mod(s1 + t * i + s2 + t * j));
  A = detail::sorted_unique(std::move(A));
  B = detail::sorted_unique(std::move(B));
  P = detail::sorted_unique(std::move(P));
  if (k % 2 == 1) {
    const Elem drop = mod(s1 + h * t + s2 + 2 * t);
    P.erase(std::remove(P.begin(), P.end(), drop), P.end());
  }
  Witness w{A, B, P, 0, "k3", 0, 0};
  w.span = detail::grid_span(GroupSpec::cyclic(n), A, B, P);
  return w;
}

namespace detail {

inline void check_distinct(const std::vector<Elem>& v, std::size_t expected,
                           const char* who) {
  if (sorted_unique(v).size() != expected)
    throw std::invalid_argument(std::string(who) +
                                ": basis not in general position");
}

} // namespace detail

// Case 2, sqrt variant over Z_q^m. d is the largest integer with q^{2d} <= k
// and t the smallest with t^2 q^{2d} >= k (so 1 <= t <= q); A and B are
// cosets of W' = {sum lambda_i u_i} with |W'| = t q^d, and P = A + B.
inline Witness case2_sqrt(const GroupSpec& spec, const std::vector<Elem>& basis,
                          Elem a_hat, Elem b_hat, std::int64_t k) {
  if (k < 3) throw std::invalid_argument("case2_sqrt: k must be >= 3");
  const std::int64_t q = spec.power_q();
  std::int64_t d = 0;
  while (static_cast<double>(std::pow(static_cast<double>(q), 2.0 * (d + 1))) <=
         static_cast<double>(k))
    ++d;
  std::int64_t qd = 1;
  for (std::int64_t i = 0; i < d; ++i) qd *= q;
  std::int64_t t = 1;
  while (t * t * qd * qd < k) ++t;
  if (t < 1 || t > q)
    throw std::logic_error("case2_sqrt: t outside [1, q]");
  if (static_cast<std::int64_t>(basis.size()) < d + 1)
    throw std::invalid_argument("case2_sqrt: insufficient basis vectors");

  // W' = all combinations, last coefficient restricted to [0, t-1]
  std::vector<Elem> wprime{spec.identity()};
  for (std::int64_t i = 0; i <= d; ++i) {
    const std::int64_t range = (i < d) ? q : t;
    std::vector<Elem> next;
    for (Elem w : wprime)
      for (std::int64_t lam = 0; lam < range; ++lam)
        next.push_back(spec.op(w, spec.scale(lam, basis[static_cast<std::size_t>(i)])));
    wprime = std::move(next);
  }
  detail::check_distinct(wprime, static_cast<std::size_t>(t * qd), "case2_sqrt");

  std::vector<Elem> A, B, P;
  for (Elem w : wprime) {
    A.push_back(spec.op(a_hat, w));
    B.push_back(spec.op(b_hat, w));
  }
  A = detail::sorted_unique(std::move(A));
  B = detail::sorted_unique(std::move(B));
  for (Elem a : A)
    for (Elem b : B) P.push_back(spec.op(a, b));
  P = detail::sorted_unique(std::move(P));
  Witness w{A, B, P, 0, "sqrt", 0, 0};
  w.span = detail::grid_span(spec, A, B, P);
  return w;
}

// Case 2, k+3 variant over Z_q^m with h = floor(k/(2q-1)) and
// t = ceil((k - h(2q-1))/2). Needs h+1 basis vectors when t >= 1 and h when
// t = 0 (the k divisible by 2q-1 repair branch: u_{h+1} is dropped from B and
// P keeps no extra block, restoring |A|+|B|+|P| = k+3 with span k+1).
inline Witness case2_k3(const GroupSpec& spec, const std::vector<Elem>& basis,
                        Elem a_hat, Elem b_hat, std::int64_t k) {
  if (k < 3) throw std::invalid_argument("case2_k3: k must be >= 3");
  const std::int64_t q = spec.power_q();
  const std::int64_t h = k / (2 * q - 1);
  const std::int64_t r = k - h * (2 * q - 1);
  const std::int64_t t = (r + 1) / 2;
  const std::int64_t need = (t >= 1) ? h + 1 : h;
  if (static_cast<std::int64_t>(basis.size()) < need)
    throw std::invalid_argument("case2_k3: insufficient basis vectors");

  std::vector<Elem> ua{spec.identity()};
  for (std::int64_t i = 0; i < h; ++i)
    for (std::int64_t lam = 1; lam < q; ++lam)
      ua.push_back(spec.scale(lam, basis[static_cast<std::size_t>(i)]));
  std::vector<Elem> A, B, P;
  if (t >= 1) {
    std::vector<Elem> ua_full = ua;
    for (std::int64_t lam = 1; lam < t; ++lam)
      ua_full.push_back(spec.scale(lam, basis[static_cast<std::size_t>(h)]));
    detail::check_distinct(ua_full,
                           static_cast<std::size_t>(h * (q - 1) + t), "case2_k3");
    for (Elem u : ua_full) A.push_back(spec.op(a_hat, u));

    B.push_back(b_hat);
    for (std::int64_t i = 0; i <= h; ++i)
      B.push_back(spec.op(b_hat, basis[static_cast<std::size_t>(i)]));

    std::vector<Elem> up = ua;
    for (std::int64_t lam = 1; lam <= t; ++lam)
      up.push_back(spec.scale(lam, basis[static_cast<std::size_t>(h)]));
    const Elem ab = spec.op(a_hat, b_hat);
    for (Elem u : up) P.push_back(spec.op(ab, u));
    P = detail::sorted_unique(std::move(P));
    if (r % 2 == 1) {
      const Elem drop =
          spec.op(ab, spec.scale(t, basis[static_cast<std::size_t>(h)]));
      P.erase(std::remove(P.begin(), P.end(), drop), P.end());
    }
  } else {
    detail::check_distinct(ua, static_cast<std::size_t>(h * (q - 1) + 1),
                           "case2_k3");
    for (Elem u : ua) A.push_back(spec.op(a_hat, u));
    B.push_back(b_hat);
    for (std::int64_t i = 0; i < h; ++i)
      B.push_back(spec.op(b_hat, basis[static_cast<std::size_t>(i)]));
    const Elem ab = spec.op(a_hat, b_hat);
    for (Elem u : ua) P.push_back(spec.op(ab, u));
  }
  A = detail::sorted_unique(std::move(A));
  B = detail::sorted_unique(std::move(B));
  P = detail::sorted_unique(std::move(P));
  Witness w{A, B, P, 0, "k3", 0, 0};
  w.span = detail::grid_span(spec, A, B, P);
  return w;
}

// Greedy cap in Z_q^m: pairwise non-proportional vectors with no 3-term
// linear relation, so that scaled sums in the case-2 constructions collide
// only where the counting expects them. A linearly independent family is a
// cap, but caps keep growing past dimension m, which is what lets k run to
// ranges where h+1 > m.
inline std::vector<Elem> cap_basis(const GroupSpec& spec, std::int64_t count) {
  const std::int64_t q = spec.power_q();
  std::vector<Elem> cap;
  std::unordered_set<Elem> forbidden{spec.identity()};
  for (Elem v = 1; v < spec.order() &&
                   static_cast<std::int64_t>(cap.size()) < count;
       ++v) {
    if (forbidden.count(v)) continue;
    // block the plane spanned by v with each chosen vector (and v itself)
    std::vector<Elem> chosen = cap;
    chosen.push_back(v);
    for (Elem u : chosen)
      for (std::int64_t al = 0; al < q; ++al)
        for (std::int64_t be = 0; be < q; ++be)
          forbidden.insert(spec.op(spec.scale(al, u), spec.scale(be, v)));
    cap.push_back(v);
  }
  return cap;
}

// -------- combinatorial subspaces of V^m, V = Z_q x Z_q --------

// Labels per coordinate: values < q*q fix that symbol, q*q + j assigns
// wildcard block j. Wildcard blocks must be nonempty and appear in order of
// first occurrence.
struct SubspacePartition {
  std::int64_t q = 2;
  std::int64_t m = 1;
  std::int64_t d = 1;
  std::vector<std::int64_t> labels;

  bool valid() const {
    if (static_cast<std::int64_t>(labels.size()) != m || d < 1) return false;
    const std::int64_t z = q * q;
    std::int64_t seen = 0;
    for (std::int64_t lab : labels) {
      if (lab < 0 || lab >= z + d) return false;
      if (lab >= z) {
        const std::int64_t j = lab - z;
        if (j > seen) return false; // first occurrences must be in order
        if (j == seen) ++seen;
      }
    }
    return seen == d;
  }
};

// C subseteq V^m as packed base-(q^2) indices.
using SymbolCube = std::unordered_set<std::uint64_t>;

namespace detail {

inline std::uint64_t pack_word(const std::vector<std::int64_t>& word,
                               std::int64_t z) {
  std::uint64_t v = 0;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    v = v * static_cast<std::uint64_t>(z) + static_cast<std::uint64_t>(*it);
  return v;
}

} // namespace detail

// True iff every point of the subspace lies in C (all (q^2)^d wildcard
// assignments enumerated).
inline bool comb_subspace_verify(const SymbolCube& C,
                                 const SubspacePartition& part) {
  if (!part.valid())
    throw std::invalid_argument("comb_subspace_verify: malformed partition");
  const std::int64_t z = part.q * part.q;
  std::vector<std::int64_t> assign(static_cast<std::size_t>(part.d), 0);
  std::vector<std::int64_t> word(static_cast<std::size_t>(part.m), 0);
  while (true) {
    for (std::int64_t i = 0; i < part.m; ++i) {
      const std::int64_t lab = part.labels[static_cast<std::size_t>(i)];
      word[static_cast<std::size_t>(i)] =
          lab < z ? lab : assign[static_cast<std::size_t>(lab - z)];
    }
    if (!C.count(detail::pack_word(word, z))) return false;
    std::int64_t j = 0;
    for (; j < part.d; ++j) {
      if (++assign[static_cast<std::size_t>(j)] < z) break;
      assign[static_cast<std::size_t>(j)] = 0;
    }
    if (j == part.d) break;
  }
  return true;
}

// First partition (in lexicographic label order) whose subspace lies in C.
inline std::optional<SubspacePartition> comb_subspace_find(
    const SymbolCube& C, std::int64_t q, std::int64_t m, std::int64_t d,
    std::uint64_t node_budget = 200'000'000ull) {
  if (q < 2 || m < 1 || d < 1)
    throw std::invalid_argument("comb_subspace_find: bad parameters");
  const std::int64_t z = q * q;
  const std::int64_t nlab = z + d;
  double total = 1.0;
  for (std::int64_t i = 0; i < m; ++i) total *= static_cast<double>(nlab);
  if (total > static_cast<double>(node_budget))
    throw budget_error("comb_subspace_find: partition space exceeds budget");

  SubspacePartition part;
  part.q = q;
  part.m = m;
  part.d = d;
  part.labels.assign(static_cast<std::size_t>(m), 0);
  while (true) {
    if (part.valid() && comb_subspace_verify(C, part)) return part;
    std::int64_t i = m - 1;
    for (; i >= 0; --i) {
      if (++part.labels[static_cast<std::size_t>(i)] < nlab) break;
      part.labels[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) break;
  }
  return std::nullopt;
}

struct ShiftAndBasis {
  Elem a_hat = 0;
  Elem b_hat = 0;
  std::vector<Elem> basis;
};

// a_hat carries the fixed first symbol coordinates, b_hat the second;
// wildcard coordinates are zero and each u_j is the indicator of block W_j.
inline ShiftAndBasis subspace_to_shift_and_basis(const GroupSpec& spec,
                                                 const SubspacePartition& part) {
  if (!part.valid())
    throw std::invalid_argument("subspace_to_shift_and_basis: malformed partition");
  if (spec.power_q() != part.q || spec.power_m() != part.m)
    throw std::invalid_argument("subspace_to_shift_and_basis: spec mismatch");
  const std::int64_t z = part.q * part.q;
  std::vector<std::int64_t> ac(static_cast<std::size_t>(part.m), 0);
  std::vector<std::int64_t> bc(static_cast<std::size_t>(part.m), 0);
  std::vector<std::vector<std::int64_t>> uc(
      static_cast<std::size_t>(part.d),
      std::vector<std::int64_t>(static_cast<std::size_t>(part.m), 0));
  for (std::int64_t i = 0; i < part.m; ++i) {
    const std::int64_t lab = part.labels[static_cast<std::size_t>(i)];
    if (lab < z) {
      ac[static_cast<std::size_t>(i)] = lab / part.q;
      bc[static_cast<std::size_t>(i)] = lab % part.q;
    } else {
      uc[static_cast<std::size_t>(lab - z)][static_cast<std::size_t>(i)] = 1;
    }
  }
  ShiftAndBasis out;
  out.a_hat = spec.from_coords(ac);
  out.b_hat = spec.from_coords(bc);
  for (const auto& c : uc) out.basis.push_back(spec.from_coords(c));
  return out;
}

// -------- coset localization --------

struct CosetLocalization {
  Elem ell = 0;
  Elem r = 0;
  std::vector<Elem> subgroup;        // sorted elements of G in the parent
  TripleSystem restricted;           // over GroupSpec::table on G
};

// Restrict S to the densest coset product ellG x Gr; the restricted system
// lives on the subgroup, indexed by position in the sorted element list, and
// witnesses pull back via (A, B, P) -> (ell A, B r, ell P r).
inline CosetLocalization coset_localize(const TripleSystem& S,
                                        std::vector<Elem> G) {
  const GroupSpec& spec = S.spec();
  std::sort(G.begin(), G.end());
  G.erase(std::unique(G.begin(), G.end()), G.end());
  if (!spec.is_subgroup(G))
    throw std::invalid_argument("coset_localize: G is not a subgroup");
  const std::int64_t order = spec.order();

  // coset representative maps
  std::vector<Elem> left_rep(static_cast<std::size_t>(order), -1);
  std::vector<Elem> right_rep(static_cast<std::size_t>(order), -1);
  for (Elem x = 0; x < order; ++x) {
    if (left_rep[static_cast<std::size_t>(x)] < 0)
      for (Elem g : G) left_rep[static_cast<std::size_t>(spec.op(x, g))] = x;
    if (right_rep[static_cast<std::size_t>(x)] < 0)
      for (Elem g : G) right_rep[static_cast<std::size_t>(spec.op(g, x))] = x;
  }

  std::map<std::pair<Elem, Elem>, std::uint64_t> cell_count;
  if (S.is_complete()) {
    // every cell has |G|^2 pairs; the smallest representative pair wins
    cell_count[{left_rep[0], right_rep[0]}] = 1;
  } else {
    for (const auto& [a, b] : S.pair_list())
      ++cell_count[{left_rep[static_cast<std::size_t>(a)],
                    right_rep[static_cast<std::size_t>(b)]}];
  }
  std::pair<Elem, Elem> best{left_rep[0], right_rep[0]};
  std::uint64_t best_count = 0;
  for (const auto& [cell, cnt] : cell_count)
    if (cnt > best_count) {
      best = cell;
      best_count = cnt;
    }

  // subgroup as a table spec over sorted G
  const std::int64_t gn = static_cast<std::int64_t>(G.size());
  std::unordered_map<Elem, Elem> index;
  for (std::int64_t i = 0; i < gn; ++i) index[G[static_cast<std::size_t>(i)]] = i;
  std::vector<std::vector<Elem>> table(static_cast<std::size_t>(gn),
                                       std::vector<Elem>(static_cast<std::size_t>(gn)));
  for (std::int64_t i = 0; i < gn; ++i)
    for (std::int64_t j = 0; j < gn; ++j)
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          index.at(spec.op(G[static_cast<std::size_t>(i)],
                           G[static_cast<std::size_t>(j)]));
  GroupSpec sub = GroupSpec::table(std::move(table));

  const Elem ell = best.first, r = best.second;
  TripleSystem restricted = [&] {
    if (S.is_complete()) return TripleSystem::complete(sub);
    std::vector<std::pair<Elem, Elem>> pairs;
    for (std::int64_t i = 0; i < gn; ++i)
      for (std::int64_t j = 0; j < gn; ++j)
        if (S.contains(spec.op(ell, G[static_cast<std::size_t>(i)]),
                       spec.op(G[static_cast<std::size_t>(j)], r)))
          pairs.emplace_back(i, j);
    return TripleSystem::from_pairs(sub, pairs);
  }();

  return CosetLocalization{ell, r, G, std::move(restricted)};
}

// -------- end-to-end pipeline --------

enum class PipelineStatus { kOk, kPatternNotFound, kBudgetExceeded };

struct PipelineConfig {
  std::uint64_t node_budget = 2'000'000'000ull;
  int workers = 1;
  std::optional<Elem> subgroup_generator; // for table specs
};

struct PipelineResult {
  PipelineStatus status = PipelineStatus::kPatternNotFound;
  Witness witness;
  std::vector<Elem> T;                          // A u B u P in the parent group
  std::vector<std::pair<Elem, Elem>> certificate; // k witnessing pairs in S
  std::int64_t certified_span = 0;
  std::string message;
};

namespace detail {

inline std::int64_t sqrt_bound(std::int64_t k) {
  return static_cast<std::int64_t>(
      std::ceil(8.0 * std::sqrt(static_cast<double>(k))));
}

// Certify against the localized system and map everything back to the parent
// group through (ell, r).
inline PipelineResult finish(const TripleSystem& S, const TripleSystem& Sloc,
                             const std::vector<Elem>& loc_to_parent_a,
                             const std::vector<Elem>& loc_to_parent_b,
                             const std::vector<Elem>& loc_to_parent_p,
                             Elem ell, Elem r, Witness w, std::int64_t k) {
  PipelineResult res;
  std::unordered_set<Elem> pset(w.P.begin(), w.P.end());
  std::vector<std::pair<Elem, Elem>> cert_local;
  for (Elem a : w.A)
    for (Elem b : w.B)
      if (Sloc.contains(a, b) && pset.count(Sloc.spec().op(a, b)))
        cert_local.emplace_back(a, b);
  if (static_cast<std::int64_t>(cert_local.size()) < k) {
    res.status = PipelineStatus::kPatternNotFound;
    res.message = "certified span below k";
    return res;
  }
  std::sort(cert_local.begin(), cert_local.end());
  cert_local.resize(static_cast<std::size_t>(k));

  Witness mapped;
  mapped.variant = w.variant;
  mapped.pullback_ell = ell;
  mapped.pullback_r = r;
  for (Elem a : w.A)
    mapped.A.push_back(loc_to_parent_a[static_cast<std::size_t>(a)]);
  for (Elem b : w.B)
    mapped.B.push_back(loc_to_parent_b[static_cast<std::size_t>(b)]);
  for (Elem p : w.P)
    mapped.P.push_back(loc_to_parent_p[static_cast<std::size_t>(p)]);
  mapped.A = sorted_unique(std::move(mapped.A));
  mapped.B = sorted_unique(std::move(mapped.B));
  mapped.P = sorted_unique(std::move(mapped.P));
  mapped.span = static_cast<std::int64_t>(cert_local.size());

  std::set<Elem> t(mapped.A.begin(), mapped.A.end());
  t.insert(mapped.B.begin(), mapped.B.end());
  t.insert(mapped.P.begin(), mapped.P.end());

  res.status = PipelineStatus::kOk;
  res.T.assign(t.begin(), t.end());
  for (const auto& [a, b] : cert_local)
    res.certificate.emplace_back(loc_to_parent_a[static_cast<std::size_t>(a)],
                                 loc_to_parent_b[static_cast<std::size_t>(b)]);
  res.certified_span = mapped.span;
  res.witness = std::move(mapped);

  // the pullback preserves membership, re-check on the parent system
  std::uint64_t parent_span = 0;
  for (const auto& [a, b] : res.certificate)
    if (S.contains(a, b)) ++parent_span;
  if (parent_span < static_cast<std::uint64_t>(k))
    throw std::logic_error("pipeline: pullback lost certified pairs");
  return res;
}

inline PipelineResult run_cyclic(const TripleSystem& S, const TripleSystem& Sloc,
                                 const std::vector<Elem>& map_a,
                                 const std::vector<Elem>& map_b,
                                 const std::vector<Elem>& map_p, Elem ell,
                                 Elem r, std::int64_t n, std::int64_t k,
                                 const std::string& variant,
                                 const PipelineConfig& cfg) {
  BitGrid C(n, Sloc.is_complete());
  if (!Sloc.is_complete())
    for (const auto& [a, b] : Sloc.pair_list()) C.set(a, b);

  PipelineResult res;
  try {
    if (variant == "sqrt") {
      const std::int64_t h = static_cast<std::int64_t>(
          std::ceil(std::sqrt(static_cast<double>(k))));
      auto pat = detail::pattern_search_rect(C, h, h, cfg.node_budget);
      if (!pat) {
        res.status = PipelineStatus::kPatternNotFound;
        res.message = "no homothetic grid found";
        return res;
      }
      return finish(S, Sloc, map_a, map_b, map_p, ell, r,
                    case1_sqrt(pat->s1, pat->s2, pat->t, k, n), k);
    }
    const std::int64_t h = (k + 1) / 2;
    auto pat = detail::pattern_search_rect(C, h, 2, cfg.node_budget);
    if (!pat) {
      res.status = PipelineStatus::kPatternNotFound;
      res.message = "no homothetic grid found";
      return res;
    }
    return finish(S, Sloc, map_a, map_b, map_p, ell, r,
                  case1_k3(pat->s1, pat->s2, pat->t, k, n), k);
  } catch (const budget_error& e) {
    res.status = PipelineStatus::kBudgetExceeded;
    res.message = e.what();
    return res;
  }
}

} // namespace detail

// Assembles localization, pattern search and the matching case construction,
// then certifies span_count(S, T) >= k with |T| <= k+3 (variant k3) or
// ceil(8 sqrt(k)) (variant sqrt).
inline PipelineResult witness_pipeline(const TripleSystem& S, std::int64_t k,
                                       const std::string& variant,
                                       const PipelineConfig& cfg = {}) {
  if (k < 3) throw std::invalid_argument("witness_pipeline: k must be >= 3");
  if (variant != "sqrt" && variant != "k3")
    throw std::invalid_argument("witness_pipeline: unknown variant");
  const GroupSpec& spec = S.spec();
  PipelineResult res;

  if (spec.kind() == GroupSpec::Kind::Cyclic) {
    const std::int64_t n = spec.order();
    std::vector<Elem> id(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
    return detail::run_cyclic(S, S, id, id, id, 0, 0, n, k, variant, cfg);
  }

  if (spec.kind() == GroupSpec::Kind::Power) {
    const std::int64_t q = spec.power_q();
    const std::int64_t m = spec.power_m();
    Elem a_hat = spec.identity(), b_hat = spec.identity();
    std::vector<Elem> basis;
    std::int64_t needed;
    if (variant == "sqrt") {
      std::int64_t d = 0;
      while (std::pow(static_cast<double>(q), 2.0 * (d + 1)) <=
             static_cast<double>(k))
        ++d;
      needed = d + 1;
    } else {
      const std::int64_t h = k / (2 * q - 1);
      const std::int64_t r = k - h * (2 * q - 1);
      needed = (r > 0) ? h + 1 : h;
    }
    if (S.is_complete()) {
      basis = cap_basis(spec, needed);
    } else {
      // desk-scale density Hales-Jewett stand-in
      try {
        SymbolCube C;
        for (const auto& [a, b] : S.pair_list()) {
          std::uint64_t word = 0, mul = 1;
          for (std::int64_t i = 0; i < m; ++i) {
            const std::int64_t ai = spec.to_coords(a)[static_cast<std::size_t>(i)];
            const std::int64_t bi = spec.to_coords(b)[static_cast<std::size_t>(i)];
            word += static_cast<std::uint64_t>(ai * q + bi) * mul;
            mul *= static_cast<std::uint64_t>(q * q);
          }
          C.insert(word);
        }
        auto part = comb_subspace_find(C, q, m, needed, cfg.node_budget);
        if (!part) {
          res.status = PipelineStatus::kPatternNotFound;
          res.message = "no combinatorial subspace found";
          return res;
        }
        auto sab = subspace_to_shift_and_basis(spec, *part);
        a_hat = sab.a_hat;
        b_hat = sab.b_hat;
        basis = std::move(sab.basis);
      } catch (const budget_error& e) {
        res.status = PipelineStatus::kBudgetExceeded;
        res.message = e.what();
        return res;
      }
    }
    if (static_cast<std::int64_t>(basis.size()) < needed) {
      res.status = PipelineStatus::kPatternNotFound;
      res.message = "could not assemble enough basis vectors";
      return res;
    }
    std::vector<Elem> id(static_cast<std::size_t>(spec.order()));
    for (std::int64_t i = 0; i < spec.order(); ++i)
      id[static_cast<std::size_t>(i)] = i;
    Witness w = (variant == "sqrt")
                    ? case2_sqrt(spec, basis, a_hat, b_hat, k)
                    : case2_k3(spec, basis, a_hat, b_hat, k);
    return detail::finish(S, S, id, id, id, 0, 0, std::move(w), k);
  }

  // table spec: a designated cyclic subgroup must be supplied
  if (!cfg.subgroup_generator) {
    throw std::invalid_argument(
        "witness_pipeline: table specs need a subgroup generator in the config");
  }
  const Elem gen = *cfg.subgroup_generator;
  std::vector<Elem> G;
  Elem x = spec.identity();
  do {
    G.push_back(x);
    x = spec.op(x, gen);
  } while (x != spec.identity());
  const std::int64_t gn = static_cast<std::int64_t>(G.size());
  if (gn < 2)
    throw std::invalid_argument("witness_pipeline: trivial subgroup generator");
  auto loc = coset_localize(S, G);
  // re-index the localized system by generator exponent so it is cyclic
  std::vector<Elem> by_exp = G; // G listed in generation order above
  std::unordered_map<Elem, Elem> sorted_index;
  for (std::int64_t i = 0; i < gn; ++i)
    sorted_index[loc.subgroup[static_cast<std::size_t>(i)]] = i;
  std::vector<std::pair<Elem, Elem>> pairs;
  GroupSpec zn = GroupSpec::cyclic(gn);
  for (std::int64_t i = 0; i < gn; ++i)
    for (std::int64_t j = 0; j < gn; ++j)
      if (loc.restricted.contains(sorted_index.at(by_exp[static_cast<std::size_t>(i)]),
                                  sorted_index.at(by_exp[static_cast<std::size_t>(j)])))
        pairs.emplace_back(i, j);
  TripleSystem Sloc = loc.restricted.is_complete()
                          ? TripleSystem::complete(zn)
                          : TripleSystem::from_pairs(zn, pairs);
  std::vector<Elem> map_a(static_cast<std::size_t>(gn));
  std::vector<Elem> map_b(static_cast<std::size_t>(gn));
  std::vector<Elem> map_p(static_cast<std::size_t>(gn));
  for (std::int64_t i = 0; i < gn; ++i) {
    const Elem g = by_exp[static_cast<std::size_t>(i)];
    map_a[static_cast<std::size_t>(i)] = spec.op(loc.ell, g);
    map_b[static_cast<std::size_t>(i)] = spec.op(g, loc.r);
    map_p[static_cast<std::size_t>(i)] = spec.op(spec.op(loc.ell, g), loc.r);
  }
  return detail::run_cyclic(S, Sloc, map_a, map_b, map_p, loc.ell, loc.r, gn, k,
                            variant, cfg);
}

} // namespace bes
