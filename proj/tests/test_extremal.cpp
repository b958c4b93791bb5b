#include <doctest.h>

#include <map>

#include "bes/extremal.hpp"

using namespace bes;

namespace {

// Independent profile oracle: enumerate the grid and count per-diagonal.
std::vector<std::int64_t> profile_by_enumeration(std::int64_t a, std::int64_t b) {
  std::map<std::int64_t, std::int64_t> mult;
  for (std::int64_t x = 1; x <= a; ++x)
    for (std::int64_t y = 1; y <= b; ++y) ++mult[x + y];
  std::vector<std::int64_t> out;
  for (const auto& [s, c] : mult) out.push_back(c);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

} // namespace

TEST_CASE("diagonal profile") {
  CHECK(diag_profile_sorted(1, 1) == std::vector<std::int64_t>{1});
  CHECK(diag_profile_sorted(2, 3) == std::vector<std::int64_t>{2, 2, 1, 1});
  CHECK(diag_profile_sorted(3, 3) == std::vector<std::int64_t>{3, 2, 2, 1, 1});
  for (std::int64_t a = 1; a <= 9; ++a)
    for (std::int64_t b = 1; b <= 9; ++b) {
      const auto d = diag_profile_sorted(a, b);
      CHECK(d == profile_by_enumeration(a, b));
      CHECK(static_cast<std::int64_t>(d.size()) == a + b - 1);
      std::int64_t sum = 0;
      for (auto v : d) sum += v;
      CHECK(sum == a * b);
    }
}

TEST_CASE("h_interval") {
  CHECK(h_interval(2, 2, 2) == 3);
  CHECK(h_interval(3, 3, 3) == 7);
  CHECK(h_interval(5, 7, 0) == 0);
  CHECK(h_interval(2, 3, 2) == 4);
  // matches the explicit profile sums everywhere small
  for (std::int64_t a = 1; a <= 9; ++a)
    for (std::int64_t b = 1; b <= 9; ++b) {
      const auto d = diag_profile_sorted(a, b);
      std::int64_t run = 0;
      for (std::int64_t ell = 0; ell <= a + b + 2; ++ell) {
        if (ell >= 1 && ell <= static_cast<std::int64_t>(d.size()))
          run += d[static_cast<std::size_t>(ell - 1)];
        CHECK(h_interval(a, b, ell) == run);
      }
      CHECK(h_interval(a, b, a + b - 1) == a * b);
    }
}

TEST_CASE("h_interval full symmetry up to m = 40") {
  for (std::int64_t a = 1; a <= 38; ++a)
    for (std::int64_t b = 1; b <= 38; ++b)
      for (std::int64_t ell = 1; a + b + ell <= 40; ++ell) {
        const std::int64_t v = h_interval(a, b, ell);
        CHECK(v == h_interval(a, ell, b));
        CHECK(v == h_interval(b, a, ell));
        CHECK(v == h_interval(b, ell, a));
        CHECK(v == h_interval(ell, a, b));
        CHECK(v == h_interval(ell, b, a));
      }
}

TEST_CASE("h_interval monotone and capped") {
  for (std::int64_t a = 1; a <= 12; ++a)
    for (std::int64_t b = 1; b <= 12; ++b)
      for (std::int64_t ell = 0; ell <= 12; ++ell) {
        const std::int64_t v = h_interval(a, b, ell);
        CHECK(v <= a * b);
        CHECK(v <= ell * std::min(a, b));
        CHECK(h_interval(a + 1, b, ell) >= v);
        CHECK(h_interval(a, b + 1, ell) >= v);
        CHECK(h_interval(a, b, ell + 1) >= v);
      }
}

TEST_CASE("h_max") {
  auto r3 = h_max(3);
  CHECK(r3.h_value == 1);
  CHECK(r3.argmax == HTriple{1, 1, 1});
  auto r6 = h_max(6);
  CHECK(r6.h_value == 3);
  CHECK(r6.argmax == HTriple{2, 2, 2});
  auto r12 = h_max(12);
  CHECK(r12.h_value == 12);
  CHECK(r12.argmax == HTriple{4, 4, 4});
  CHECK_THROWS_AS(h_max(2), std::invalid_argument);
}

TEST_CASE("h_max argmax components stay near m/3") {
  for (std::int64_t m = 3; m <= 300; ++m) {
    const auto rec = h_max(m);
    const std::int64_t lo = m / 3, hi = (m + 2) / 3;
    for (std::int64_t c : {rec.argmax.a, rec.argmax.b, rec.argmax.ell}) {
      CHECK(c >= lo);
      CHECK(c <= hi);
    }
  }
}

TEST_CASE("quadratic law") {
  const double v = static_cast<double>(h_interval(1000, 1000, 1000));
  CHECK(std::abs(v / (0.75e6) - 1.0) <= 0.01);
}

TEST_CASE("g_exact small values") {
  CHECK(g_exact(1) == 3);
  CHECK(g_exact(2) == 5);
  CHECK(g_exact(3) == 6);
  CHECK(g_exact(4) == 7);
  CHECK(g_exact(5) == 8);
  CHECK(g_exact(6) == 9);
  CHECK(g_exact(12) == 12);
}

TEST_CASE("g inversion consistency and upper bounds") {
  for (std::int64_t k = 1; k <= 10'000; ++k) {
    const std::int64_t m = g_exact(k);
    CHECK(h_max(m).h_value >= k);
    if (m > 3) CHECK(h_max(m - 1).h_value < k);
    if (k >= 3) CHECK(m <= k + 3);
    CHECK(static_cast<double>(m) <= 8.0 * std::sqrt(static_cast<double>(k)));
  }
}

TEST_CASE("g asymptotic ratio") {
  CHECK(g_asymptotic_ratio(3) == doctest::Approx(1.0));
  CHECK(g_asymptotic_ratio(12) == doctest::Approx(1.0));
  CHECK(std::abs(g_asymptotic_ratio(1'000'000) - 1.0) <= 0.02);
}

TEST_CASE("g_brute agrees with g_exact") {
  CHECK(g_brute(1, 3) == 3);
  CHECK(g_brute(2, 4) == 5);
  for (std::int64_t k = 1; k <= 6; ++k)
    CHECK(g_brute(k, k + 2) == g_exact(k));
}

TEST_CASE("g_brute is stable under grid growth") {
  for (std::int64_t k = 1; k <= 4; ++k)
    CHECK(g_brute(k, k + 2) == g_brute(k, k + 4));
}

TEST_CASE("g_brute budget is enforced") {
  CHECK_THROWS_AS(g_brute(6, 8, 1000), budget_error);
}
