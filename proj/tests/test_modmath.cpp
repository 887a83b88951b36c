#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "lrc/modmath.hpp"
#include "primes.hpp"

using namespace lrc;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ||r/n|| >= 1/(k+1) evaluated with rationals rather than the integer form.
bool admissible_by_rationals(std::uint64_t r, std::uint64_t n, int k) {
  Rational x(static_cast<long long>(r), static_cast<long long>(n));
  Rational dist = x < Rational(1, 2) ? x : Rational(1) - x;
  return dist >= Rational(1, k + 1);
}

}  // namespace

TEST_CASE("level validation") {
  CHECK_THROWS_AS(Level(1, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(Level(3, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Level(3, 1, 1), std::invalid_argument);
  const Level l(3, 4, 5);
  CHECK(l.modulus() == 20);
  CHECK(l.in_universe(19));
  CHECK_FALSE(l.in_universe(15));
  CHECK_FALSE(l.in_universe(0));
}

TEST_CASE("universe members") {
  CHECK(build_universe(Level(3, 2, 3)).members == std::vector<Residue>{1, 2, 4, 5});
  CHECK(build_universe(Level(3, 1, 5)).members == std::vector<Residue>{1, 2, 3, 4});

  const auto u = build_universe(Level(8, 9, 11));
  std::vector<Residue> expected;
  for (Residue r = 0; r < 99; ++r) {
    if (r % 11 != 0) expected.push_back(r);
  }
  CHECK(u.members == expected);
  CHECK(u.members.size() == 90);
}

TEST_CASE("universe size is l(p-1)") {
  for (std::uint32_t p = 2; p <= 50; ++p) {
    if (!trial_division_prime(p)) continue;
    for (std::uint32_t ell = 1; ell <= 12; ++ell) {
      const auto u = build_universe(Level(3, ell, p));
      CHECK(u.members.size() == ell * (p - 1));
      for (auto r : u.members) CHECK((r > 0 && r < ell * p && r % p != 0));
    }
  }
}

TEST_CASE("admissible times") {
  CHECK(admissible_times(Level(3, 2, 5)).good.positions() == std::vector<std::size_t>{3, 4, 5, 6, 7});
  std::vector<std::size_t> mid;
  for (std::size_t r = 5; r <= 15; ++r) mid.push_back(r);
  CHECK(admissible_times(Level(3, 4, 5)).good.positions() == mid);

  for (int k : {2, 3, 5, 8}) {
    for (std::uint32_t ell : {1u, 3u, 9u}) {
      for (std::uint32_t p : {2u, 5u, 11u}) {
        const Level level(k, ell, p);
        const auto a = admissible_times(level);
        const std::uint32_t n = level.modulus();
        CHECK_FALSE(a.good.test(0));
        for (std::uint32_t r = 1; r < n; ++r) {
          CHECK(a.good.test(r) == a.good.test(n - r));
          CHECK(a.good.test(r) == admissible_by_rationals(r, n, k));
        }
      }
    }
  }
}

TEST_CASE("t = l is a witness whenever p <= k+1") {
  for (std::uint32_t p : {2u, 3u}) {
    const Level level(3, 4, p);
    const auto a = admissible_times(level);
    for (auto v : build_universe(level).members) {
      const std::uint64_t r = std::uint64_t{4} * v % level.modulus();
      CHECK(r == 4 * (v % p));
      CHECK(a.good.test(r));
    }
  }
}

TEST_CASE("gcd witness") {
  const std::vector<Residue> a{1, 2, 4};
  const auto w = gcd_witness(a, Level(3, 4, 5), true);
  REQUIRE(w);
  CHECK(w->divisor == 2);
  CHECK(w->removed == Residue{1});

  const std::vector<Residue> b{1, 2, 3};
  CHECK_FALSE(gcd_witness(b, Level(3, 2, 5), true));

  const std::vector<Residue> c{2, 4};
  const auto wc = gcd_witness(c, Level(3, 4, 5), false);
  REQUIRE(wc);
  CHECK(wc->divisor == 2);
  CHECK_FALSE(wc->removed);

  // Conservative rule: dropping 1 from {1,2} does not count for small sets.
  const std::vector<Residue> d{1, 2};
  CHECK_FALSE(gcd_witness(d, Level(3, 4, 5), false));

  const std::vector<Residue> bad{5};
  CHECK_THROWS_AS(gcd_witness(bad, Level(3, 4, 5), false), std::invalid_argument);
  CHECK_THROWS_AS(gcd_witness(std::vector<Residue>{}, Level(3, 4, 5), false), std::invalid_argument);
}

TEST_CASE("gcd witness divisors never share a factor with p") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t p = std::array<std::uint32_t, 5>{3, 5, 7, 11, 13}[rng() % 5];
    const std::uint32_t ell = 1 + rng() % 12;
    const int k = 2 + static_cast<int>(rng() % 6);
    const Level level(k, ell, p);
    const auto members = build_universe(level).members;
    if (members.size() < static_cast<std::size_t>(k)) continue;
    std::vector<Residue> values;
    while (values.size() < static_cast<std::size_t>(k)) {
      const Residue v = members[rng() % members.size()];
      if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    if (auto w = gcd_witness(values, level, true)) {
      CHECK(std::gcd<std::uint64_t>(w->divisor, p) == 1);
      CHECK(ell % w->divisor == 0);
      std::uint64_t g = level.modulus();
      for (auto v : values) {
        if (v != *w->removed) g = std::gcd<std::uint64_t>(g, v);
      }
      CHECK(g % w->divisor == 0);
    }
  }
}

TEST_CASE("primality") {
  for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
  CHECK(is_prime(2305843009213693951ULL));   // 2^61 - 1
  CHECK_FALSE(is_prime(3215031751ULL));      // strong pseudoprime to bases 2, 3, 5, 7
  CHECK_FALSE(is_prime(18446744073709551615ULL));
  CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  CHECK(primes_in_range(11, 43) == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29, 31, 37, 41, 43});
}

TEST_CASE("bound C_k") {
  const auto b8 = bound_C(8);
  CHECK(b8.integral);
  // binom(9,2)^7 / 8 = 36^7 / 8
  BigInt inner8 = 1;
  for (int i = 0; i < 7; ++i) inner8 *= 36;
  inner8 /= 8;
  CHECK(inner8 == BigInt(9795520512LL));
  CHECK(b8.inner == Rational(inner8));
  BigInt power = 1;
  for (int i = 0; i < 8; ++i) power *= inner8;
  CHECK(b8.value == power);
  CHECK(b8.value < pow10(80));
  CHECK(decimal_digits(b8.value) == 80);

  const auto b9 = bound_C(9);
  CHECK(b9.integral);
  CHECK(b9.value < pow10(111));
  CHECK(decimal_digits(b9.value) == 111);

  const auto b2 = bound_C(2);
  CHECK_FALSE(b2.integral);
  CHECK(b2.inner == Rational(3, 2));
  CHECK(b2.value == 1);
}

TEST_CASE("prime products against the bound") {
  const auto s8 = load_primes("S8.txt");
  const auto s9 = load_primes("S9.txt");
  REQUIRE(s8.size() == 39);
  REQUIRE(s9.size() == 47);

  const auto c8 = product_exceeds_bound(s8, 8);
  CHECK(c8.exceeds);
  CHECK(c8.product > pow10(82));
  const auto c9 = product_exceeds_bound(s9, 9);
  CHECK(c9.exceeds);
  CHECK(c9.product > pow10(112));

  const auto none = product_exceeds_bound(std::vector<std::uint64_t>{}, 8);
  CHECK_FALSE(none.exceeds);
  CHECK(none.product == 1);

  CHECK_THROWS_AS(product_exceeds_bound(std::vector<std::uint64_t>{47, 47}, 8), std::invalid_argument);
  CHECK_THROWS_AS(product_exceeds_bound(std::vector<std::uint64_t>{47, 49}, 8), std::invalid_argument);
  CHECK_THROWS_AS(product_exceeds_bound(std::vector<std::uint64_t>{1}, 8), std::invalid_argument);
}
