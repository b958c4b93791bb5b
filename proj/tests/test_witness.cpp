#include <doctest.h>

#include <random>

#include "bes/witness.hpp"

using namespace bes;

namespace {

std::vector<Elem> sorted(std::vector<Elem> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// quadruple-loop reference for the homothetic grid search
bool naive_grid_exists(const BitGrid& C, std::int64_t h) {
  const std::int64_t n = C.n();
  for (std::int64_t t = 1; t * h <= n; ++t)
    for (std::int64_t x0 = 0; x0 + t * (h - 1) < n; ++x0)
      for (std::int64_t y0 = 0; y0 + t * (h - 1) < n; ++y0) {
        bool ok = true;
        for (std::int64_t i = 0; i < h && ok; ++i)
          for (std::int64_t j = 0; j < h && ok; ++j)
            ok = C.test(x0 + t * i, y0 + t * j);
        if (ok) return true;
      }
  return false;
}

bool pattern_in_grid(const BitGrid& C, const GridPattern& pat) {
  for (std::int64_t i = 1; i <= pat.h; ++i)
    for (std::int64_t j = 1; j <= pat.h; ++j)
      if (!C.test(pat.s1 + pat.t * i, pat.s2 + pat.t * j)) return false;
  return true;
}

} // namespace

TEST_CASE("grid pattern search on structured inputs") {
  BitGrid full(8, true);
  auto pat = grid_pattern_search(full, 2);
  REQUIRE(pat.has_value());
  CHECK(pat->t == 1);
  CHECK(pattern_in_grid(full, *pat));

  BitGrid even(8);
  for (std::int64_t x = 0; x < 8; x += 2)
    for (std::int64_t y = 0; y < 8; y += 2) even.set(x, y);
  pat = grid_pattern_search(even, 2);
  REQUIRE(pat.has_value());
  CHECK(pat->t == 2);
  CHECK(pattern_in_grid(even, *pat));

  // a full-height band of empty rows blocks any n x n grid
  BitGrid banded(8, true);
  BitGrid blocked(8);
  for (std::int64_t x = 0; x < 8; ++x)
    for (std::int64_t y = 0; y < 8; ++y)
      if (x < 2 || x >= 6) blocked.set(x, y);
  CHECK_FALSE(grid_pattern_search(blocked, 8).has_value());
  CHECK_FALSE(grid_pattern_search(BitGrid(6), 2).has_value());
}

TEST_CASE("grid pattern search agrees with a naive reference") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 200; ++it) {
    BitGrid C(12);
    for (std::int64_t x = 0; x < 12; ++x)
      for (std::int64_t y = 0; y < 12; ++y)
        if (rng() % 10 < 7) C.set(x, y);
    for (std::int64_t h = 2; h <= 4; ++h) {
      const auto pat = grid_pattern_search(C, h);
      CHECK(pat.has_value() == naive_grid_exists(C, h));
      if (pat) CHECK(pattern_in_grid(C, *pat));
    }
  }
}

TEST_CASE("grid pattern search budget") {
  BitGrid C(64);
  CHECK_THROWS_AS(grid_pattern_search(C, 3, 10), budget_error);
}

TEST_CASE("case1_sqrt") {
  const auto w = case1_sqrt(0, 0, 1, 4, 100);
  CHECK(sorted(w.A) == std::vector<Elem>{1, 2});
  CHECK(sorted(w.B) == std::vector<Elem>{1, 2});
  CHECK(sorted(w.P) == std::vector<Elem>{2, 3, 4});
  CHECK(w.span == 4);
  CHECK(w.size_total() == 7);

  CHECK_THROWS_AS(case1_sqrt(0, 0, 1, 2, 100), std::invalid_argument);
  CHECK_THROWS_AS(case1_sqrt(0, 0, 0, 4, 100), std::invalid_argument);
}

TEST_CASE("case1_k3 small cases") {
  auto w4 = case1_k3(0, 0, 1, 4, 100);
  CHECK(sorted(w4.A) == std::vector<Elem>{1, 2});
  CHECK(sorted(w4.B) == std::vector<Elem>{1, 2});
  CHECK(sorted(w4.P) == std::vector<Elem>{2, 3, 4});
  CHECK(w4.size_total() == 7);
  CHECK(w4.span == 4);

  auto w5 = case1_k3(0, 0, 1, 5, 100);
  CHECK(sorted(w5.A) == std::vector<Elem>{1, 2, 3});
  CHECK(sorted(w5.B) == std::vector<Elem>{1, 2});
  CHECK(sorted(w5.P) == std::vector<Elem>{2, 3, 4}); // 5 removed by parity
  CHECK(w5.size_total() == 8);
  CHECK(w5.span == 5);

  auto w3 = case1_k3(0, 0, 1, 3, 100);
  CHECK(w3.size_total() == 6);
  CHECK(w3.span == 3);
}

TEST_CASE("case1 size identities for k up to 500") {
  const std::int64_t n = 2048;
  const auto S = full_system(GroupSpec::cyclic(n));
  std::mt19937_64 rng(17);
  for (std::int64_t k = 3; k <= 500; ++k) {
    const std::int64_t s1 = static_cast<std::int64_t>(rng() % n);
    const std::int64_t s2 = static_cast<std::int64_t>(rng() % n);
    const auto wk = case1_k3(s1, s2, 1, k, n);
    CHECK(wk.size_total() == k + 3);
    CHECK(wk.span == k);
    const auto ws = case1_sqrt(s1, s2, 1, k, n);
    CHECK(ws.span >= k);
    CHECK(ws.size_total() <= static_cast<std::int64_t>(
                                 std::ceil(8.0 * std::sqrt(static_cast<double>(k)))));
    // span claims hold against the full system's own counter
    std::vector<Elem> T = wk.A;
    T.insert(T.end(), wk.B.begin(), wk.B.end());
    T.insert(T.end(), wk.P.begin(), wk.P.end());
    CHECK(span_count(S, T) >= static_cast<std::uint64_t>(k));
  }
}

TEST_CASE("case2_sqrt") {
  const GroupSpec p34 = GroupSpec::power(3, 4);
  const auto basis34 = cap_basis(p34, 3);
  auto w9 = case2_sqrt(p34, basis34, p34.identity(), p34.identity(), 9);
  CHECK(w9.A.size() == 3); // d=1, t=1, |W'| = 3
  CHECK(w9.span >= 9);
  CHECK(w9.size_total() <= 12);

  const GroupSpec p23 = GroupSpec::power(2, 3);
  const auto basis23 = cap_basis(p23, 2);
  auto w3 = case2_sqrt(p23, basis23, p23.identity(), p23.identity(), 3);
  CHECK(w3.A.size() == 2); // d=0, t=2
  CHECK(w3.span == 4);

  const GroupSpec p52 = GroupSpec::power(5, 2);
  const auto basis52 = cap_basis(p52, 1);
  auto w24 = case2_sqrt(p52, basis52, p52.identity(), p52.identity(), 24);
  CHECK(w24.A.size() == 5); // d=0, t=5
  CHECK(w24.span == 25);
}

TEST_CASE("case2_k3") {
  const GroupSpec p34 = GroupSpec::power(3, 4);
  const auto basis = cap_basis(p34, 4);

  auto w11 = case2_k3(p34, basis, p34.identity(), p34.identity(), 11);
  CHECK(w11.A.size() == 5); // h=2, t=1
  CHECK(w11.B.size() == 4);
  CHECK(w11.P.size() == 5);
  CHECK(w11.size_total() == 14);
  CHECK(w11.span == 11);

  auto w10 = case2_k3(p34, basis, p34.identity(), p34.identity(), 10);
  CHECK(w10.A.size() == 5); // t=0 repair branch
  CHECK(w10.B.size() == 3);
  CHECK(w10.P.size() == 5);
  CHECK(w10.size_total() == 13);
  CHECK(w10.span == 11);

  const GroupSpec p23 = GroupSpec::power(2, 3);
  auto w6 = case2_k3(p23, cap_basis(p23, 3), p23.identity(), p23.identity(), 6);
  CHECK(w6.A.size() == 3);
  CHECK(w6.B.size() == 3);
  CHECK(w6.P.size() == 3);
  CHECK(w6.span == 7);
}

TEST_CASE("case2 identities across the supported k range") {
  const GroupSpec p38 = GroupSpec::power(3, 8);
  const auto basis = cap_basis(p38, 12);
  REQUIRE(basis.size() >= 11);
  const Elem a_hat = p38.from_coords({1, 0, 2, 0, 0, 0, 0, 0});
  const Elem b_hat = p38.from_coords({0, 1, 0, 0, 2, 0, 0, 0});
  for (std::int64_t k = 3; k <= 50; ++k) {
    const auto wk = case2_k3(p38, basis, a_hat, b_hat, k);
    CHECK(wk.size_total() == k + 3);
    const std::int64_t h = k / 5, r = k - 5 * h;
    if (r == 0) {
      CHECK(wk.span == k + 1);
    } else {
      CHECK(wk.span >= k);
      if (r % 2 == 0) CHECK(wk.span == k);
    }
    const auto ws = case2_sqrt(p38, basis, a_hat, b_hat, k);
    CHECK(ws.span >= k);
    CHECK(ws.size_total() <= static_cast<std::int64_t>(
                                 std::ceil(8.0 * std::sqrt(static_cast<double>(k)))));
  }
}

TEST_CASE("cap basis is in general position") {
  const GroupSpec p38 = GroupSpec::power(3, 8);
  const auto cap = cap_basis(p38, 12);
  REQUIRE(cap.size() == 12);
  // no two proportional, no scaled sum of two landing on a third
  std::unordered_set<Elem> members(cap.begin(), cap.end());
  for (std::size_t i = 0; i < cap.size(); ++i)
    for (std::size_t j = 0; j < cap.size(); ++j) {
      if (i == j) continue;
      for (std::int64_t al = 1; al < 3; ++al)
        for (std::int64_t be = 1; be < 3; ++be) {
          const Elem s = p38.op(p38.scale(al, cap[i]), p38.scale(be, cap[j]));
          CHECK(s != p38.identity());
          for (std::size_t l = 0; l < cap.size(); ++l)
            if (l != i && l != j)
              for (std::int64_t ga = 1; ga < 3; ++ga)
                CHECK(s != p38.scale(ga, cap[l]));
        }
    }
}

namespace {

SymbolCube cube_from_words(const std::vector<std::vector<std::int64_t>>& words,
                           std::int64_t z) {
  SymbolCube C;
  for (const auto& w : words) C.insert(detail::pack_word(w, z));
  return C;
}

// enumerate every valid partition for tiny (q, m, d) and verify literally
bool brute_subspace_exists(const SymbolCube& C, std::int64_t q, std::int64_t m,
                           std::int64_t d) {
  const std::int64_t nlab = q * q + d;
  std::vector<std::int64_t> labels(static_cast<std::size_t>(m), 0);
  while (true) {
    SubspacePartition part{q, m, d, labels};
    if (part.valid() && comb_subspace_verify(C, part)) return true;
    std::int64_t i = m - 1;
    for (; i >= 0; --i) {
      if (++labels[static_cast<std::size_t>(i)] < nlab) break;
      labels[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) return false;
  }
}

} // namespace

TEST_CASE("combinatorial subspace verify") {
  // full cube: everything verifies
  std::vector<std::vector<std::int64_t>> all;
  for (std::int64_t a = 0; a < 4; ++a)
    for (std::int64_t b = 0; b < 4; ++b) all.push_back({a, b});
  const SymbolCube full = cube_from_words(all, 4);
  CHECK(comb_subspace_verify(full, {2, 2, 1, {4, 1}}));

  // diagonal pairs in V^2, V = Z_2 x Z_2: wildcard must repeat
  std::vector<std::vector<std::int64_t>> diag;
  for (std::int64_t s = 0; s < 4; ++s) diag.push_back({s, s});
  const SymbolCube D = cube_from_words(diag, 4);
  CHECK(comb_subspace_verify(D, {2, 2, 1, {4, 4}}));
  CHECK_FALSE(comb_subspace_verify(D, {2, 2, 1, {4, 1}}));
  CHECK_FALSE(comb_subspace_verify(D, {2, 2, 1, {4, 0}}));

  // removing one subspace point flips the verdict
  SymbolCube punctured = full;
  punctured.erase(detail::pack_word({3, 1}, 4));
  CHECK_FALSE(comb_subspace_verify(punctured, {2, 2, 1, {4, 1}}));

  CHECK_THROWS_AS(comb_subspace_verify(full, {2, 2, 1, {4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(comb_subspace_verify(full, {2, 2, 2, {5, 4}}),
                  std::invalid_argument); // first occurrences out of order
}

TEST_CASE("combinatorial subspace find") {
  std::vector<std::vector<std::int64_t>> all;
  for (std::int64_t a = 0; a < 4; ++a)
    for (std::int64_t b = 0; b < 4; ++b)
      for (std::int64_t c = 0; c < 4; ++c) all.push_back({a, b, c});
  const SymbolCube full = cube_from_words(all, 4);
  auto part = comb_subspace_find(full, 2, 3, 1);
  REQUIRE(part.has_value());
  CHECK(part->labels == std::vector<std::int64_t>{0, 0, 4}); // first canonical

  CHECK_FALSE(comb_subspace_find(SymbolCube{}, 2, 2, 1).has_value());

  // first coordinate pinned to symbol 0: the wildcard block avoids it
  std::vector<std::vector<std::int64_t>> pinned;
  for (std::int64_t b = 0; b < 4; ++b)
    for (std::int64_t c = 0; c < 4; ++c) pinned.push_back({0, b, c});
  auto pp = comb_subspace_find(cube_from_words(pinned, 4), 2, 3, 1);
  REQUIRE(pp.has_value());
  CHECK(pp->labels[0] == 0);
  CHECK((pp->labels[1] == 4 || pp->labels[2] == 4));

  CHECK_THROWS_AS(comb_subspace_find(full, 3, 12, 2, 1000), budget_error);
}

TEST_CASE("subspace find agrees with brute enumeration") {
  std::mt19937_64 rng(29);
  for (std::int64_t m = 1; m <= 3; ++m)
    for (int it = 0; it < 60; ++it) {
      SymbolCube C;
      std::uint64_t total = 1;
      for (std::int64_t i = 0; i < m; ++i) total *= 4;
      for (std::uint64_t w = 0; w < total; ++w)
        if (rng() % 4 != 0) C.insert(w);
      for (std::int64_t d = 1; d <= std::min<std::int64_t>(m, 2); ++d) {
        const auto found = comb_subspace_find(C, 2, m, d);
        CHECK(found.has_value() == brute_subspace_exists(C, 2, m, d));
        if (found) CHECK(comb_subspace_verify(C, *found));
      }
    }
}

TEST_CASE("subspace to shift and basis") {
  const GroupSpec p23 = GroupSpec::power(2, 3);
  auto sab = subspace_to_shift_and_basis(p23, {2, 3, 1, {4, 4, 4}});
  CHECK(sab.a_hat == p23.identity());
  CHECK(sab.b_hat == p23.identity());
  REQUIRE(sab.basis.size() == 1);
  CHECK(p23.to_coords(sab.basis[0]) == std::vector<std::int64_t>{1, 1, 1});

  // mixed partition: subspace membership transfers to (a, b, a+b) triples
  const SubspacePartition part{2, 3, 1, {3, 4, 4}}; // symbol 3 = (a,b) = (1,1)
  std::vector<std::vector<std::int64_t>> words;
  for (std::int64_t w = 0; w < 4; ++w) words.push_back({3, w, w});
  const SymbolCube C = cube_from_words(words, 4);
  REQUIRE(comb_subspace_verify(C, part));
  sab = subspace_to_shift_and_basis(p23, part);
  CHECK(p23.to_coords(sab.a_hat) == std::vector<std::int64_t>{1, 0, 0});
  CHECK(p23.to_coords(sab.b_hat) == std::vector<std::int64_t>{1, 0, 0});
  REQUIRE(sab.basis.size() == 1);
  for (std::int64_t al = 0; al < 2; ++al)
    for (std::int64_t be = 0; be < 2; ++be) {
      const Elem a = p23.op(sab.a_hat, p23.scale(al, sab.basis[0]));
      const Elem b = p23.op(sab.b_hat, p23.scale(be, sab.basis[0]));
      std::vector<std::int64_t> word;
      for (std::int64_t i = 0; i < 3; ++i)
        word.push_back(p23.to_coords(a)[static_cast<std::size_t>(i)] * 2 +
                       p23.to_coords(b)[static_cast<std::size_t>(i)]);
      CHECK(C.count(detail::pack_word(word, 4)) == 1);
    }
}

TEST_CASE("coset localization") {
  const GroupSpec z12 = GroupSpec::cyclic(12);

  // full system: density 1 is preserved on the restriction
  auto loc = coset_localize(full_system(z12), {0, 4, 8});
  CHECK(loc.subgroup == std::vector<Elem>{0, 4, 8});
  CHECK(loc.restricted.is_complete());
  CHECK(loc.restricted.spec().order() == 3);

  // concentrated system: the dense coset cell is recovered
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem g : {0, 4, 8})
    for (Elem g2 : {0, 4, 8}) pairs.emplace_back((1 + g) % 12, (g2 + 2) % 12);
  auto conc = coset_localize(TripleSystem::from_pairs(z12, pairs), {0, 4, 8});
  CHECK(conc.ell == 1);
  CHECK(conc.r == 2);
  CHECK(conc.restricted.size() == 9);

  // density never drops below the parent's under the argmax cell
  std::mt19937_64 rng(31);
  for (int it = 0; it < 10; ++it) {
    const auto S = random_dense(z12, 1, 2, rng());
    auto l = coset_localize(S, {0, 6});
    const double parent = static_cast<double>(S.size()) / 144.0;
    const double child = static_cast<double>(l.restricted.size()) / 4.0;
    CHECK(child >= parent - 1e-12);
  }

  CHECK_THROWS_AS(coset_localize(full_system(z12), {0, 4, 7}),
                  std::invalid_argument);
}

TEST_CASE("pipeline on full cyclic systems") {
  const auto S = full_system(GroupSpec::cyclic(2048));
  auto res = witness_pipeline(S, 10, "k3");
  REQUIRE(res.status == PipelineStatus::kOk);
  CHECK(res.witness.size_total() == 13);
  CHECK(res.certified_span >= 10);
  CHECK(static_cast<std::int64_t>(res.certificate.size()) == 10);
  CHECK(span_count(S, res.T) >= 10);

  auto sq = witness_pipeline(S, 10, "sqrt");
  REQUIRE(sq.status == PipelineStatus::kOk);
  CHECK(sq.witness.size_total() <= 26); // ceil(8 sqrt(10))
  CHECK(span_count(S, sq.T) >= 10);
}

TEST_CASE("pipeline on the full elementary power group") {
  const auto S = full_system(GroupSpec::power(3, 8));
  auto res = witness_pipeline(S, 9, "sqrt");
  REQUIRE(res.status == PipelineStatus::kOk);
  CHECK(res.witness.size_total() <= 12);
  CHECK(res.certified_span >= 9);
  CHECK(span_count(S, res.T) >= 9);

  auto k3 = witness_pipeline(S, 9, "k3");
  REQUIRE(k3.status == PipelineStatus::kOk);
  CHECK(k3.witness.size_total() == 12);
  CHECK(span_count(S, k3.T) >= 9);
}

TEST_CASE("pipeline on dense random cyclic input") {
  const auto S = random_dense(GroupSpec::cyclic(512), 19, 20, 101);
  auto res = witness_pipeline(S, 4, "sqrt");
  // a failed search is a legal outcome on random input, success must certify
  if (res.status == PipelineStatus::kOk) {
    CHECK(res.witness.size_total() <= 16);
    CHECK(span_count(S, res.T) >= 4);
  } else {
    CHECK(res.status == PipelineStatus::kPatternNotFound);
  }
}

TEST_CASE("pipeline reports an honest failure on sparse input") {
  const auto S = random_dense(GroupSpec::cyclic(64), 1, 50, 5);
  auto res = witness_pipeline(S, 20, "k3");
  CHECK(res.status == PipelineStatus::kPatternNotFound);
  CHECK_FALSE(res.message.empty());
}

TEST_CASE("pipeline budget propagates") {
  const auto S = random_dense(GroupSpec::cyclic(256), 3, 4, 9);
  PipelineConfig cfg;
  cfg.node_budget = 10;
  auto res = witness_pipeline(S, 16, "k3", cfg);
  CHECK(res.status == PipelineStatus::kBudgetExceeded);
}

namespace {

std::vector<std::vector<Elem>> cyclic_table(std::int64_t n) {
  std::vector<std::vector<Elem>> t(static_cast<std::size_t>(n),
                                   std::vector<Elem>(static_cast<std::size_t>(n)));
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  return t;
}

} // namespace

TEST_CASE("pipeline on a table spec through a designated subgroup") {
  const GroupSpec tab = GroupSpec::table(cyclic_table(24));
  // concentrate the system on one coset cell of <2>
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem g = 0; g < 24; g += 2)
    for (Elem g2 = 0; g2 < 24; g2 += 2)
      pairs.emplace_back((1 + g) % 24, (g2 + 3) % 24);
  const auto S = TripleSystem::from_pairs(tab, pairs);

  PipelineConfig cfg;
  cfg.subgroup_generator = 2;
  auto res = witness_pipeline(S, 5, "k3", cfg);
  REQUIRE(res.status == PipelineStatus::kOk);
  CHECK(res.witness.size_total() == 8);
  CHECK(res.certified_span >= 5);
  CHECK(res.witness.pullback_ell == 1);
  CHECK(res.witness.pullback_r == 1); // smallest representative of 3 + <2>
  CHECK(span_count(S, res.T) >= 5);
  for (Elem a : res.witness.A) CHECK(a % 2 == 1); // lives in the 1+<2> coset

  CHECK_THROWS_AS(witness_pipeline(S, 5, "k3"), std::invalid_argument);
}
