#include "lrc/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lrc {
namespace {

bool time_witness_exists(std::span<const Residue> entries, std::uint64_t n, int k) {
  for (std::uint64_t t = 0; t < n; ++t) {
    bool all = true;
    for (auto v : entries) {
      const std::uint64_t r = t * v % n;
      const std::uint64_t dist = std::min(r, n - r);
      if (static_cast<std::uint64_t>(k + 1) * dist < n) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool removal_gcd_exists(std::span<const Residue> entries, std::uint64_t n) {
  for (std::size_t skip = 0; skip < entries.size(); ++skip) {
    std::uint64_t g = n;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i != skip) g = std::gcd(g, std::uint64_t{entries[i]});
    }
    if (g > 1) return true;
  }
  return false;
}

std::uint64_t multiset_count(std::uint64_t n, std::uint64_t k) {
  // C(n + k - 1, k), saturating past the guard.
  BigInt c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    c = c * (n + i) / (i + 1);
    if (c > kOracleGuard) return kOracleGuard + 1;
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

std::vector<Residue> TupleSpeedSet::support() const {
  std::vector<Residue> s = entries;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<std::vector<Residue>> NaiveImproper::supports() const {
  std::vector<std::vector<Residue>> out;
  for (const auto& t : tuples) out.push_back(t.support());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_tuple_improper(std::span<const Residue> entries, const Level& level) {
  if (entries.size() != static_cast<std::size_t>(level.k())) {
    throw std::invalid_argument("tuple must have exactly k entries");
  }
  for (auto v : entries) {
    if (v == 0 || v >= level.modulus() || v % level.p() == 0) {
      throw std::invalid_argument("tuple entry " + std::to_string(v) + " outside B(l,p)");
    }
  }
  const std::uint64_t n = level.modulus();
  return !removal_gcd_exists(entries, n) && !time_witness_exists(entries, n, level.k());
}

NaiveImproper naive_improper(const Level& level) {
  std::vector<Residue> universe;
  for (Residue r = 1; r < level.modulus(); ++r) {
    if (r % level.p() != 0) universe.push_back(r);
  }
  const auto k = static_cast<std::size_t>(level.k());
  const std::uint64_t count = multiset_count(universe.size(), k);
  if (count > kOracleGuard) {
    throw OracleGuardError("naive_improper: " + to_string(level) + " has more than " + std::to_string(kOracleGuard) +
                           " multisets");
  }

  NaiveImproper out{level, {}};
  // Nondecreasing index sequences enumerate each multiset once.
  std::vector<std::size_t> idx(k, 0);
  std::vector<Residue> entries(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) entries[i] = universe[idx[i]];
    if (is_tuple_improper(entries, level)) out.tuples.push_back({entries});
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == universe.size() - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[i - 1];
  }
  return out;
}

Rational distance_to_integer(const Rational& x) {
  const BigInt fl = numerator(x) / denominator(x) - (numerator(x) < 0 && numerator(x) % denominator(x) != 0 ? 1 : 0);
  const Rational frac = x - Rational(fl);
  const Rational other = Rational(1) - frac;
  return frac < other ? frac : other;
}

std::vector<RationalInterval> bad_intervals(std::uint64_t speed, const Rational& threshold) {
  if (speed == 0) throw std::invalid_argument("speeds must be positive");
  if (threshold <= 0 || threshold > Rational(1, 2)) throw std::invalid_argument("threshold must lie in (0, 1/2]");
  // ||t v|| < d  <=>  t in ((j - d)/v, (j + d)/v) for some integer j.
  std::vector<RationalInterval> out;
  const Rational v(speed);
  for (std::uint64_t j = 0; j <= speed; ++j) {
    Rational lo = (Rational(j) - threshold) / v;
    Rational hi = (Rational(j) + threshold) / v;
    bool lo_closed = false;
    if (lo < 0) {
      lo = 0;
      lo_closed = true;
    }
    if (hi > 1) hi = 1;
    if (lo < hi) out.push_back({lo, hi, lo_closed, false});
  }
  return out;
}

LonelyDecision lrc_decide(std::span<const std::uint64_t> speeds, const Rational& threshold) {
  if (speeds.empty()) throw std::invalid_argument("lrc_decide: no speeds");
  std::vector<std::uint64_t> sorted(speeds.begin(), speeds.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("lrc_decide: duplicate speeds");
  }
  std::vector<RationalInterval> all;
  for (auto v : sorted) {
    auto part = bad_intervals(v, threshold);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end(), [](const RationalInterval& a, const RationalInterval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });

  // Invariant: every point below `reach` is covered; `reach_covered` says
  // whether reach itself is.
  Rational reach = 0;
  bool reach_covered = false;
  for (const auto& iv : all) {
    const bool gap = iv.lo > reach || (iv.lo == reach && !iv.lo_closed && !reach_covered);
    if (gap) {
      if (!reach_covered) return {true, reach};
      // reach is covered but (reach, lo) is not.
      return {true, iv.lo_closed ? (reach + iv.lo) / 2 : iv.lo};
    }
    if (iv.hi > reach) {
      reach = iv.hi;
      reach_covered = iv.hi_closed;
    } else if (iv.hi == reach) {
      reach_covered = reach_covered || iv.hi_closed;
    }
  }
  if (reach < 1) return {true, reach_covered ? (reach + 1) / 2 : reach};
  return {false, std::nullopt};
}

EvidenceCheck confirm_improper_evidence(const SpeedSet& set, const Level& level) {
  const auto k = static_cast<std::size_t>(level.k());
  const auto support = set.to_vector();
  if (support.empty() || support.size() > k) throw std::invalid_argument("evidence size must be 1..k");

  EvidenceCheck out;
  std::vector<Residue> entries;
  // Give support[i] a multiplicity of at least one; the parts sum to k.
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    const std::size_t left = k - entries.size();
    if (i + 1 == support.size()) {
      entries.insert(entries.end(), left, support[i]);
      ++out.patterns;
      const bool hit = is_tuple_improper(entries, level);
      if (hit) out.tuple = TupleSpeedSet{entries};
      entries.resize(entries.size() - left);
      return hit;
    }
    const std::size_t later = support.size() - i - 1;
    for (std::size_t m = 1; m + later <= left; ++m) {
      entries.insert(entries.end(), m, support[i]);
      const bool hit = self(self, i + 1);
      entries.resize(entries.size() - m);
      if (hit) return true;
    }
    return false;
  };
  out.confirmed = rec(rec, 0);
  return out;
}

}  // namespace lrc
