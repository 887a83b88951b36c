#pragma once

// Slow reference implementations used to cross-check the engine. Nothing
// here shares code with the engine beyond the Level and SpeedSet types.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lrc/engine.hpp"
#include "lrc/modmath.hpp"

namespace lrc {

/// A k-tuple of residues, stored as a sorted multiset.
struct TupleSpeedSet {
  std::vector<Residue> entries;

  /// Distinct values, ascending.
  std::vector<Residue> support() const;
  friend bool operator==(const TupleSpeedSet&, const TupleSpeedSet&) = default;
  friend auto operator<=>(const TupleSpeedSet&, const TupleSpeedSet&) = default;
};

/// Hard limit on the multisets naive_improper will enumerate.
inline constexpr std::uint64_t kOracleGuard = 100'000'000;

class OracleGuardError : public Error {
 public:
  using Error::Error;
};

struct NaiveImproper {
  Level level;
  std::vector<TupleSpeedSet> tuples;  // ascending

  /// Supports of the improper tuples, ascending and unique.
  std::vector<std::vector<Residue>> supports() const;
};

/// Tuple semantics taken literally: the tuple is proper iff removing some
/// index leaves entries whose gcd with N exceeds 1, or some t in [0, N) makes
/// every t*v_i mod N admissible.
bool is_tuple_improper(std::span<const Residue> entries, const Level& level);

/// Every improper multiset of size k over B(l,p). Throws OracleGuardError
/// before doing any work when the multiset count exceeds kOracleGuard.
NaiveImproper naive_improper(const Level& level);

struct RationalInterval {
  Rational lo, hi;
  bool lo_closed = false;
  bool hi_closed = false;
};

/// {t in [0,1) : ||t v|| < threshold}, as sorted disjoint pieces.
std::vector<RationalInterval> bad_intervals(std::uint64_t speed, const Rational& threshold);

struct LonelyDecision {
  bool exists = false;
  /// Smallest t in [0,1) with ||t v|| >= threshold for every speed.
  std::optional<Rational> witness;
};

/// Exact sweep deciding whether the bad sets of all speeds cover [0,1).
LonelyDecision lrc_decide(std::span<const std::uint64_t> speeds, const Rational& threshold);

/// ||x||, exactly.
Rational distance_to_integer(const Rational& x);

struct EvidenceCheck {
  bool confirmed = false;
  /// An improper k-tuple with the given support, when confirmed.
  std::optional<TupleSpeedSet> tuple;
  std::uint64_t patterns = 0;  // multiplicity patterns examined
};

/// Tries every multiplicity pattern of the support (sizes summing to k).
EvidenceCheck confirm_improper_evidence(const SpeedSet& set, const Level& level);

}  // namespace lrc
