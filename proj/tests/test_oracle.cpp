#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>

#include "lrc/engine.hpp"
#include "lrc/oracle.hpp"

using namespace lrc;

namespace {

using Speeds = std::vector<std::uint64_t>;

bool lonely_at(const Speeds& speeds, const Rational& t, const Rational& threshold) {
  for (auto v : speeds) {
    if (distance_to_integer(t * Rational(static_cast<long long>(v))) < threshold) return false;
  }
  return true;
}

// Times a/q for a sampled grid; good enough to find some lonely time when
// one exists with small denominator.
std::optional<Rational> grid_search(const Speeds& speeds, const Rational& threshold, long long q) {
  for (long long a = 0; a < q; ++a) {
    const Rational t(a, q);
    if (lonely_at(speeds, t, threshold)) return t;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("distance to the nearest integer") {
  CHECK(distance_to_integer(Rational(1, 4)) == Rational(1, 4));
  CHECK(distance_to_integer(Rational(3, 4)) == Rational(1, 4));
  CHECK(distance_to_integer(Rational(7, 2)) == Rational(1, 2));
  CHECK(distance_to_integer(Rational(-1, 3)) == Rational(1, 3));
  CHECK(distance_to_integer(Rational(5)) == 0);
}

TEST_CASE("tuple properness") {
  CHECK(is_tuple_improper(std::vector<Residue>{1, 2, 3}, Level(3, 2, 5)));
  CHECK_FALSE(is_tuple_improper(std::vector<Residue>{1, 2, 3}, Level(3, 4, 5)));
  // Removing an index of a repeated value keeps the value present.
  CHECK_FALSE(is_tuple_improper(std::vector<Residue>{1, 2, 4}, Level(3, 4, 5)));
  CHECK_THROWS_AS(is_tuple_improper(std::vector<Residue>{1, 2}, Level(3, 4, 5)), std::invalid_argument);
  CHECK_THROWS_AS(is_tuple_improper(std::vector<Residue>{1, 2, 5}, Level(3, 4, 5)), std::invalid_argument);
}

TEST_CASE("naive improper tuples") {
  const auto a = naive_improper(Level(3, 2, 5));
  CHECK(std::binary_search(a.tuples.begin(), a.tuples.end(), TupleSpeedSet{{1, 2, 3}}));
  CHECK(naive_improper(Level(3, 4, 3)).tuples.empty());
  CHECK(naive_improper(Level(2, 1, 2)).tuples.empty());
  CHECK_THROWS_AS(naive_improper(Level(8, 9, 47)), OracleGuardError);

  // Multiset count C(n+k-1, k) over B(2,5), n = 8.
  std::uint64_t total = 0;
  const auto u = build_universe(Level(3, 2, 5)).members;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i; j < u.size(); ++j)
      for (std::size_t l = j; l < u.size(); ++l) total += is_tuple_improper(std::vector<Residue>{u[i], u[j], u[l]}, Level(3, 2, 5));
  CHECK(total == a.tuples.size());
}

TEST_CASE("engine and tuple oracle agree") {
  for (int k : {2, 3}) {
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
      for (std::uint32_t ell : {1u, 2u, 3u, 4u}) {
        const Level level(k, ell, p);
        const auto naive = naive_improper(level);
        for (auto r : {Representation::literal, Representation::sign_reduced}) {
          EngineOptions o;
          o.representation = r;
          const auto engine = compute_improper_base(level, o);
          CHECK_MESSAGE(engine.empty() == naive.tuples.empty(), to_string(level), " ", to_string(r));
          if (r == Representation::literal) {
            for (const auto& s : naive.supports()) CHECK(engine.contains(SpeedSet(s)));
          }
        }
      }
    }
  }
}

TEST_CASE("evidence confirmation") {
  const auto yes = confirm_improper_evidence(SpeedSet{1, 2, 3}, Level(3, 2, 5));
  CHECK(yes.confirmed);
  REQUIRE(yes.tuple);
  CHECK(yes.tuple->entries == std::vector<Residue>{1, 2, 3});
  CHECK(yes.patterns == 1);

  // {2,4} at (3,4,5): patterns (2,2,4) and (2,4,4), checked one by one.
  const Level l(3, 4, 5);
  const bool expect = is_tuple_improper(std::vector<Residue>{2, 2, 4}, l) || is_tuple_improper(std::vector<Residue>{2, 4, 4}, l);
  const auto two = confirm_improper_evidence(SpeedSet{2, 4}, l);
  CHECK(two.confirmed == expect);
  CHECK(two.patterns == 2);

  // Two values and k = 5 give C(4,1) = 4 multiplicity patterns.
  const auto big = confirm_improper_evidence(SpeedSet{1, 6}, Level(5, 1, 7));
  if (!big.confirmed) CHECK(big.patterns == 4);
  if (big.confirmed) CHECK(big.patterns <= 4);
  CHECK_THROWS_AS(confirm_improper_evidence(SpeedSet{1, 2, 3, 4}, l), std::invalid_argument);
}

TEST_CASE("confirmed evidence agrees with the naive tuple list") {
  for (const Level level : {Level(3, 1, 5), Level(3, 2, 5), Level(3, 2, 7), Level(2, 3, 5)}) {
    const auto naive = naive_improper(level);
    const auto supports = naive.supports();
    for (const auto& s : compute_improper_base(level).sets) {
      const bool in_naive = std::binary_search(supports.begin(), supports.end(), s.to_vector());
      CHECK(confirm_improper_evidence(s, level).confirmed == in_naive);
    }
  }
}

TEST_CASE("bad intervals") {
  const auto one = bad_intervals(1, Rational(1, 4));
  REQUIRE(one.size() == 2);
  CHECK(one[0].lo == 0);
  CHECK(one[0].lo_closed);
  CHECK(one[0].hi == Rational(1, 4));
  CHECK_FALSE(one[0].hi_closed);
  CHECK(one[1].lo == Rational(3, 4));
  CHECK(one[1].hi == 1);
  CHECK_THROWS_AS(bad_intervals(0, Rational(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(bad_intervals(1, Rational(3, 4)), std::invalid_argument);
  CHECK_THROWS_AS(bad_intervals(1, Rational(0)), std::invalid_argument);
}

TEST_CASE("lonely runner decisions") {
  const Speeds s123{1, 2, 3};
  const auto yes = lrc_decide(s123, Rational(1, 4));
  CHECK(yes.exists);
  CHECK(yes.witness == Rational(1, 4));
  CHECK_FALSE(lrc_decide(s123, Rational(26, 100)).exists);
  CHECK_FALSE(lrc_decide(s123, Rational(1, 4) + Rational(1, 1000000)).exists);

  const auto single = lrc_decide(Speeds{1}, Rational(1, 2));
  CHECK(single.exists);
  CHECK(single.witness == Rational(1, 2));
  const auto seven = lrc_decide(Speeds{7}, Rational(1, 2));
  CHECK(seven.exists);
  CHECK(seven.witness == Rational(1, 14));

  CHECK_THROWS_AS(lrc_decide(Speeds{1, 1}, Rational(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(lrc_decide(Speeds{0, 1}, Rational(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(lrc_decide(Speeds{}, Rational(1, 4)), std::invalid_argument);
}

TEST_CASE("witnesses are lonely and decisions match a time grid") {
  const std::vector<Speeds> cases{{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}, {1, 3, 4, 7}, {2, 5, 9}, {1, 2, 3, 4, 5},
                                  {3, 5, 8, 13}, {1, 4, 6, 10}, {5, 6, 7, 8}};
  for (const auto& speeds : cases) {
    for (const Rational& threshold :
         {Rational(1, 10), Rational(1, static_cast<long long>(speeds.size()) + 1), Rational(1, 3), Rational(2, 5)}) {
      const auto d = lrc_decide(speeds, threshold);
      if (d.exists) {
        REQUIRE(d.witness);
        CHECK(lonely_at(speeds, *d.witness, threshold));
        CHECK(*d.witness >= 0);
        CHECK(*d.witness < 1);
      }
      // Lonely sets are finite unions of closed intervals with endpoints of
      // the form (j ± threshold)/v; a fine enough grid hits one.
      long long q = 1;
      for (auto v : speeds) q = std::lcm(q, static_cast<long long>(v));
      q *= static_cast<long long>(denominator(threshold)) * 2;
      CHECK(d.exists == grid_search(speeds, threshold, q).has_value());
    }
  }
}

TEST_CASE("decisions are invariant under rescaling") {
  const std::vector<Speeds> cases{{1, 2, 3}, {1, 3, 4, 7}, {2, 5, 9}, {1, 2, 3, 4, 5}};
  for (const auto& speeds : cases) {
    for (const Rational& threshold : {Rational(1, 4), Rational(26, 100), Rational(1, 6), Rational(1, 3)}) {
      const bool base = lrc_decide(speeds, threshold).exists;
      for (std::uint64_t c : {2u, 3u, 7u}) {
        Speeds scaled;
        for (auto v : speeds) scaled.push_back(v * c);
        CHECK(lrc_decide(scaled, threshold).exists == base);
      }
    }
  }
}

TEST_CASE("the first k speeds reach loneliness exactly 1/(k+1)") {
  for (std::uint64_t k = 1; k <= 6; ++k) {
    Speeds speeds(k);
    std::iota(speeds.begin(), speeds.end(), 1);
    const auto d = lrc_decide(speeds, Rational(1, static_cast<long long>(k) + 1));
    CHECK(d.exists);
    REQUIRE(d.witness);
    CHECK((k + 1) % static_cast<std::uint64_t>(denominator(*d.witness)) == 0);
    const Rational above = Rational(1, static_cast<long long>(k) + 1) + Rational(1, 1000);
    if (above <= Rational(1, 2)) {
      CHECK_FALSE(lrc_decide(speeds, above).exists);
    } else {
      CHECK_THROWS_AS(lrc_decide(speeds, above), std::invalid_argument);
    }
  }
}
