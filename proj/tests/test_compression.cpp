#include <doctest.h>

#include <random>

#include "bes/compression.hpp"

using namespace bes;

TEST_CASE("h_sets_brute on small instances") {
  CHECK(h_sets_brute({{1}, {1}, 1}) == 1);
  CHECK(h_sets_brute({{1, 2}, {1, 3}, 1}) == 1);
  CHECK(h_sets_brute({{1, 2}, {1, 2, 3}, 2}) == 4); // = h_interval(2, 3, 2)
  CHECK(h_sets_brute({{1, 2}, {1, 2}, 0}) == 0);
}

TEST_CASE("multiplicity shortcut equals literal enumeration") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::int64_t> coord(-6, 6);
  std::uniform_int_distribution<int> size(1, 4);
  for (int it = 0; it < 300; ++it) {
    std::set<std::int64_t> A, B;
    for (int i = size(rng); i > 0; --i) A.insert(coord(rng));
    for (int i = size(rng); i > 0; --i) B.insert(coord(rng));
    for (std::int64_t ell = 0; ell <= 5; ++ell) {
      SetPairInstance inst{{A.begin(), A.end()}, {B.begin(), B.end()}, ell};
      CHECK(h_sets_brute(inst) == h_sets_enumerated(inst));
    }
  }
}

TEST_CASE("equality on arithmetic progressions with a common difference") {
  for (std::int64_t step : {1, 2, 5}) {
    for (std::int64_t a = 1; a <= 5; ++a)
      for (std::int64_t b = 1; b <= 5; ++b)
        for (std::int64_t ell = 0; ell <= a + b; ++ell) {
          std::vector<std::int64_t> A, B;
          for (std::int64_t i = 0; i < a; ++i) A.push_back(3 + step * i);
          for (std::int64_t i = 0; i < b; ++i) B.push_back(-7 + step * i);
          CHECK(h_sets_brute({A, B, ell}) == h_interval(a, b, ell));
        }
  }
}

TEST_CASE("monotone in ell and set inclusion") {
  const std::vector<std::int64_t> A{1, 4, 6}, B{2, 3, 9};
  for (std::int64_t ell = 0; ell < 6; ++ell) {
    CHECK(h_sets_brute({A, B, ell}) <= h_sets_brute({A, B, ell + 1}));
    std::vector<std::int64_t> A2 = A;
    A2.push_back(11);
    CHECK(h_sets_brute({A, B, ell}) <= h_sets_brute({A2, B, ell}));
  }
}

TEST_CASE("verify_compression small") {
  const auto rep = verify_compression(3, 2, 3);
  CHECK(rep.ok());
  CHECK(rep.instances_checked > 0);
}

TEST_CASE("verify_compression is deterministic across worker counts") {
  const auto a = verify_compression(5, 3, 4, 1);
  const auto b = verify_compression(5, 3, 4, 8);
  CHECK(a.ok());
  CHECK(a.instances_checked == b.instances_checked);
  CHECK(a.counterexamples.size() == b.counterexamples.size());
}

TEST_CASE("verify_compression rejects oversized parameters") {
  CHECK_THROWS_AS(verify_compression(30, 4, 4), budget_error);
}
