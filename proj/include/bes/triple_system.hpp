#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "bes/errors.hpp"
#include "bes/extremal.hpp"
#include "bes/group.hpp"
#include "bes/point_set.hpp"

namespace bes {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational reduced(std::uint64_t n, std::uint64_t d) {
    const std::uint64_t g = std::gcd(n, d == 0 ? 1 : d);
    return {n / g, d / g};
  }
};

// Set of pairs (a, b) over a group, each denoting the triple (a, b, a*b).
// The complete (density-1) system is kept implicit so quadratically many
// pairs never have to be materialized.
class TripleSystem {
public:
  static TripleSystem complete(GroupSpec spec) {
    TripleSystem s(std::move(spec));
    s.complete_ = true;
    return s;
  }

  static TripleSystem from_pairs(GroupSpec spec,
                                 const std::vector<std::pair<Elem, Elem>>& pairs) {
    TripleSystem s(std::move(spec));
    for (const auto& [a, b] : pairs) s.insert(a, b);
    return s;
  }

  const GroupSpec& spec() const { return spec_; }
  bool is_complete() const { return complete_; }

  std::uint64_t size() const {
    if (complete_) {
      const std::uint64_t n = static_cast<std::uint64_t>(spec_.order());
      return n * n;
    }
    return pairs_.size();
  }

  Rational density() const {
    const std::uint64_t n = static_cast<std::uint64_t>(spec_.order());
    return Rational::reduced(size(), n * n);
  }

  bool contains(Elem a, Elem b) const {
    if (a < 0 || b < 0 || a >= spec_.order() || b >= spec_.order()) return false;
    if (complete_) return true;
    return pairs_.count(pack(a, b)) > 0;
  }

  void insert(Elem a, Elem b) {
    if (a < 0 || b < 0 || a >= spec_.order() || b >= spec_.order())
      throw std::invalid_argument("TripleSystem: element out of range");
    if (!complete_) pairs_.insert(pack(a, b));
  }

  // Sorted pair list; refuses to materialize a complete system beyond the
  // stated budget.
  std::vector<std::pair<Elem, Elem>> pair_list(
      std::uint64_t budget = 50'000'000ull) const {
    if (size() > budget)
      throw budget_error("TripleSystem: pair list exceeds budget");
    std::vector<std::pair<Elem, Elem>> out;
    out.reserve(size());
    if (complete_) {
      for (Elem a = 0; a < spec_.order(); ++a)
        for (Elem b = 0; b < spec_.order(); ++b) out.emplace_back(a, b);
      return out;
    }
    for (std::uint64_t p : pairs_)
      out.emplace_back(static_cast<Elem>(p / static_cast<std::uint64_t>(spec_.order())),
                       static_cast<Elem>(p % static_cast<std::uint64_t>(spec_.order())));
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  explicit TripleSystem(GroupSpec spec) : spec_(std::move(spec)) {}

  std::uint64_t pack(Elem a, Elem b) const {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(spec_.order()) +
           static_cast<std::uint64_t>(b);
  }

  GroupSpec spec_;
  bool complete_ = false;
  std::unordered_set<std::uint64_t> pairs_;
};

inline TripleSystem full_system(const GroupSpec& spec) {
  return TripleSystem::complete(spec);
}

// Keep each pair independently with probability c_num/c_den. Reproducible for
// a fixed seed.
inline TripleSystem random_dense(const GroupSpec& spec, std::uint64_t c_num,
                                 std::uint64_t c_den, std::uint64_t seed,
                                 std::uint64_t budget = 50'000'000ull) {
  if (c_den == 0 || c_num == 0 || c_num > c_den)
    throw std::invalid_argument("random_dense: c must be in (0, 1]");
  const std::uint64_t n = static_cast<std::uint64_t>(spec.order());
  if (n * n > budget) throw budget_error("random_dense: order^2 exceeds budget");
  if (c_num == c_den) return full_system(spec);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, c_den - 1);
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem a = 0; a < spec.order(); ++a)
    for (Elem b = 0; b < spec.order(); ++b)
      if (dist(rng) < c_num) pairs.emplace_back(a, b);
  return TripleSystem::from_pairs(spec, pairs);
}

// The n^2/64 construction over Z_n: all pairs A x B for the intervals
// A = [n/8, 2n/8 - 1], B = [2n/8, 3n/8 - 1]; A, B and A+B are pairwise
// disjoint.
inline TripleSystem lower_bound_system(std::int64_t n) {
  if (n < 8 || n % 8 != 0)
    throw std::invalid_argument("lower_bound_system: n must be a positive multiple of 8");
  GroupSpec spec = GroupSpec::cyclic(n);
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem a = n / 8; a <= 2 * n / 8 - 1; ++a)
    for (Elem b = 2 * n / 8; b <= 3 * n / 8 - 1; ++b) pairs.emplace_back(a, b);
  return TripleSystem::from_pairs(spec, pairs);
}

// Number of triples of S inside T^3. Degenerate triples (|{a, b, ab}| < 3)
// count by default; a true BES instance never contains them, but the dense
// artifact systems do.
inline std::uint64_t span_count(const TripleSystem& S,
                                const std::vector<Elem>& T,
                                bool exclude_degenerate = false) {
  std::unordered_set<Elem> in(T.begin(), T.end());
  const std::uint64_t t = in.size();
  std::uint64_t count = 0;
  auto qualifies = [&](Elem a, Elem b) {
    const Elem ab = S.spec().op(a, b);
    if (!in.count(ab)) return false;
    if (exclude_degenerate && (a == b || a == ab || b == ab)) return false;
    return true;
  };
  if (t * t <= S.size() || S.is_complete()) {
    for (Elem a : in)
      for (Elem b : in)
        if (S.contains(a, b) && qualifies(a, b)) ++count;
  } else {
    for (const auto& [a, b] : S.pair_list())
      if (in.count(a) && in.count(b) && qualifies(a, b)) ++count;
  }
  return count;
}

// Union of {a, b, ab} over the given pairs.
inline std::vector<Elem> spanned_elements(
    const TripleSystem& S, const std::vector<std::pair<Elem, Elem>>& pairs) {
  std::set<Elem> out;
  for (const auto& [a, b] : pairs) {
    out.insert(a);
    out.insert(b);
    out.insert(S.spec().op(a, b));
  }
  return {out.begin(), out.end()};
}

struct MinSpanResult {
  std::vector<Elem> T;
  std::int64_t size = 0;
};

// Smallest vertex set spanning >= k triples, found as the minimum of
// |spanned_elements| over k-subsets of pairs. Exact: any T spanning k triples
// contains the span of some k of them.
inline MinSpanResult min_span_brute(const TripleSystem& S, std::int64_t k,
                                    std::uint64_t node_budget = 500'000'000ull) {
  if (k < 1) throw std::invalid_argument("min_span_brute: k must be >= 1");
  const auto pairs = S.pair_list(node_budget);
  const std::int64_t n = static_cast<std::int64_t>(pairs.size());
  if (k > n) throw std::invalid_argument("min_span_brute: k exceeds pair count");
  {
    double est = 1.0;
    for (std::int64_t i = 0; i < k; ++i)
      est = est * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (est > static_cast<double>(node_budget))
      throw budget_error("min_span_brute: subset count exceeds node budget");
  }

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<std::pair<Elem, Elem>> chosen, best_subset;
  std::set<Elem> span;

  std::function<void(std::int64_t)> rec = [&](std::int64_t next) {
    if (static_cast<std::int64_t>(span.size()) >= best) return;
    if (static_cast<std::int64_t>(chosen.size()) == k) {
      best = static_cast<std::int64_t>(span.size());
      best_subset = chosen;
      return;
    }
    const std::int64_t need = k - static_cast<std::int64_t>(chosen.size());
    for (std::int64_t i = next; i <= n - need; ++i) {
      const auto [a, b] = pairs[static_cast<std::size_t>(i)];
      const Elem ab = S.spec().op(a, b);
      std::vector<Elem> added;
      for (Elem e : {a, b, ab})
        if (span.insert(e).second) added.push_back(e);
      chosen.push_back(pairs[static_cast<std::size_t>(i)]);
      rec(i + 1);
      chosen.pop_back();
      for (Elem e : added) span.erase(e);
    }
  };
  rec(0);

  MinSpanResult res;
  res.size = best;
  res.T = spanned_elements(S, best_subset);
  return res;
}

// True iff every k pairs of lower_bound_system(n) span at least g(k)
// elements, i.e. no (g(k)-1)-element vertex set spans k triples.
inline bool verify_lower_bound(std::int64_t n, std::int64_t k,
                               std::uint64_t node_budget = 500'000'000ull) {
  const TripleSystem S = lower_bound_system(n);
  return min_span_brute(S, k, node_budget).size >= g_exact(k);
}

} // namespace bes
