#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <thread>
#include <vector>

#include "bes/errors.hpp"
#include "bes/extremal.hpp"

namespace bes {

struct SetPairInstance {
  std::vector<std::int64_t> A; // duplicate-free, nonempty
  std::vector<std::int64_t> B;
  std::int64_t ell = 0;
};

namespace detail {

inline std::vector<std::int64_t> diag_multiplicities(
    const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B) {
  std::map<std::int64_t, std::int64_t> mult;
  for (std::int64_t x : A)
    for (std::int64_t y : B) ++mult[x + y];
  std::vector<std::int64_t> out;
  out.reserve(mult.size());
  for (const auto& [sum, cnt] : mult) out.push_back(cnt);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

} // namespace detail

// h(A, B, ell): the largest number of points of A x B covered by ell
// anti-diagonals, i.e. the sum of the ell largest diagonal multiplicities.
inline std::int64_t h_sets_brute(const SetPairInstance& inst) {
  if (inst.A.empty() || inst.B.empty())
    throw std::invalid_argument("h_sets_brute: A and B must be nonempty");
  if (inst.ell < 0)
    throw std::invalid_argument("h_sets_brute: ell must be >= 0");
  const auto mult = detail::diag_multiplicities(inst.A, inst.B);
  std::int64_t sum = 0;
  for (std::size_t i = 0;
       i < mult.size() && i < static_cast<std::size_t>(inst.ell); ++i)
    sum += mult[i];
  return sum;
}

// Literal reading of the definition: maximize over explicit ell-subsets of
// the occupied diagonal values. Cross-validates the multiplicity shortcut.
inline std::int64_t h_sets_enumerated(const SetPairInstance& inst,
                                      std::size_t max_diagonals = 20) {
  if (inst.A.empty() || inst.B.empty())
    throw std::invalid_argument("h_sets_enumerated: A and B must be nonempty");
  std::map<std::int64_t, std::int64_t> mult;
  for (std::int64_t x : inst.A)
    for (std::int64_t y : inst.B) ++mult[x + y];
  if (mult.size() > max_diagonals)
    throw budget_error("h_sets_enumerated: too many occupied diagonals");
  std::vector<std::int64_t> counts;
  for (const auto& [sum, cnt] : mult) counts.push_back(cnt);
  const std::size_t n = counts.size();
  const std::size_t pick = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::max<std::int64_t>(inst.ell, 0)));
  std::int64_t best = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > pick) continue;
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) s += counts[i];
    best = std::max(best, s);
  }
  return best;
}

struct CompressionReport {
  std::uint64_t instances_checked = 0;
  std::vector<SetPairInstance> counterexamples;
  std::int64_t max_coord = 0;
  std::int64_t max_size = 0;
  std::int64_t max_ell = 0;

  bool ok() const { return counterexamples.empty(); }
};

namespace detail {

// Nonempty subsets of {1..max_coord} with at most max_size elements and
// minimum 1: the diagonal multiset is translation invariant in A and B
// separately, so anchoring the minimum loses no instances.
inline std::vector<std::vector<std::int64_t>> anchored_subsets(
    std::int64_t max_coord, std::int64_t max_size) {
  std::vector<std::vector<std::int64_t>> out;
  const std::int64_t span = max_coord - 1; // elements 2..max_coord optional
  for (std::uint64_t mask = 0; mask < (1ull << span); ++mask) {
    if (std::popcount(mask) + 1 > max_size) continue;
    std::vector<std::int64_t> s{1};
    for (std::int64_t i = 0; i < span; ++i)
      if (mask & (1ull << i)) s.push_back(i + 2);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail

// Exhaustive check of the compression lemma h(A,B,ell) <= h([|A|],[|B|],ell)
// over all anchored A, B within the stated bounds. Workers partition the A
// index; counterexample lists merge in A-index order, so the report is
// identical for any worker count.
inline CompressionReport verify_compression(std::int64_t max_coord,
                                            std::int64_t max_size,
                                            std::int64_t max_ell,
                                            int workers = 1) {
  if (max_coord < 1 || max_size < 1 || max_ell < 0)
    throw std::invalid_argument("verify_compression: bad parameters");
  if (max_coord > 16)
    throw budget_error("verify_compression: max_coord beyond budget");
  const auto subsets = detail::anchored_subsets(max_coord, max_size);

  CompressionReport rep;
  rep.max_coord = max_coord;
  rep.max_size = max_size;
  rep.max_ell = max_ell;

  if (workers < 1) workers = 1;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(workers), 0);
  std::vector<std::vector<SetPairInstance>> bad(
      static_cast<std::size_t>(workers));

  auto run = [&](int w) {
    for (std::size_t ia = static_cast<std::size_t>(w); ia < subsets.size();
         ia += static_cast<std::size_t>(workers)) {
      const auto& A = subsets[ia];
      for (const auto& B : subsets) {
        const auto mult = detail::diag_multiplicities(A, B);
        std::int64_t running = 0;
        for (std::int64_t ell = 0; ell <= max_ell; ++ell) {
          if (ell >= 1 && static_cast<std::size_t>(ell) <= mult.size())
            running += mult[static_cast<std::size_t>(ell - 1)];
          ++counts[static_cast<std::size_t>(w)];
          if (running > h_interval(static_cast<std::int64_t>(A.size()),
                                   static_cast<std::int64_t>(B.size()), ell))
            bad[static_cast<std::size_t>(w)].push_back({A, B, ell});
        }
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  for (std::uint64_t c : counts) rep.instances_checked += c;
  // deterministic merge: order by (A, B, ell)
  for (auto& v : bad)
    rep.counterexamples.insert(rep.counterexamples.end(), v.begin(), v.end());
  std::sort(rep.counterexamples.begin(), rep.counterexamples.end(),
            [](const SetPairInstance& l, const SetPairInstance& r) {
              return std::tie(l.A, l.B, l.ell) < std::tie(r.A, r.B, r.ell);
            });
  return rep;
}

} // namespace bes
