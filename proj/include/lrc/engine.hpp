#pragma once

// Enumeration engine: canonical speed sets, witness tables, properness
// classification, improper collections at a level, shadow lifting,
// shadow intersection and ladder execution.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lrc/modmath.hpp"
#include "lrc/planner.hpp"

namespace lrc {

inline constexpr std::size_t kMaxSpeeds = 16;
/// Witness tables hold modulus^2 bits; larger levels are refused.
inline constexpr std::uint32_t kMaxEngineModulus = 16384;

/// Strictly increasing list of distinct residues. A set of size m < k
/// stands for every k-tuple whose support is exactly this set.
class SpeedSet {
 public:
  SpeedSet() = default;
  SpeedSet(std::initializer_list<Residue> values);
  explicit SpeedSet(std::span<const Residue> values);

  /// Sorts; throws on duplicates.
  static SpeedSet from_unsorted(std::span<const Residue> values);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Residue operator[](std::size_t i) const { return values_[i]; }
  Residue front() const { return values_[0]; }
  Residue back() const { return values_[size_ - 1]; }
  std::vector<Residue> to_vector() const;

  friend bool operator==(const SpeedSet& a, const SpeedSet& b);
  friend std::strong_ordering operator<=>(const SpeedSet& a, const SpeedSet& b);

 private:
  // Engine moduli never exceed kMaxEngineModulus, so 16 bits suffice.
  std::array<std::uint16_t, kMaxSpeeds> values_{};
  std::uint8_t size_ = 0;
};

std::string to_string(const SpeedSet& set);

/// How a level's residues are represented.
///  literal:      every residue of B(l,p).
///  sign_reduced: one representative min(u, N-u) per pair {u, N-u}.
/// Replacing one entry u of a tuple by N-u changes neither the admissibility
/// of t*u nor any gcd with N, so the sign-reduced universe decides the same
/// tuple question with a factor of up to 2^k fewer sets.
enum class Representation { literal, sign_reduced };

std::string to_string(Representation r);
Representation parse_representation(std::string_view text);

/// Canonical residue of u at modulus n under the representation.
inline Residue canonical_residue(Residue u, std::uint32_t n, Representation r) {
  return r == Representation::sign_reduced && 2 * std::uint64_t{u} > n ? n - u : u;
}

/// Residues of the universe under the representation, ascending.
std::vector<Residue> universe_members(const Level& level, Representation r);

/// Throws std::invalid_argument unless every value is in B(l,p), the set has
/// 1..k entries and (sign_reduced) every value is canonical.
void check_set(const SpeedSet& set, const Level& level, Representation r);

struct TimeWitness {
  Residue t = 0;
  friend bool operator==(const TimeWitness&, const TimeWitness&) = default;
};
struct Improper {
  friend bool operator==(const Improper&, const Improper&) = default;
};
using ProperStatus = std::variant<TimeWitness, GcdWitness, Improper>;

std::string to_string(const ProperStatus& status);
inline bool is_improper(const ProperStatus& s) { return std::holds_alternative<Improper>(s); }

/// Row v has bit t set iff t*v mod N is admissible.
class WitnessTable {
 public:
  WitnessTable(const Level& level, const AdmissibleTimes& admissible);

  const Level& level() const { return level_; }
  std::size_t words_per_row() const { return words_; }
  std::span<const std::uint64_t> row(Residue v) const {
    return {rows_.data() + std::size_t{v} * words_, words_};
  }
  bool test(Residue v, Residue t) const { return (row(v)[t >> 6] >> (t & 63)) & 1u; }

 private:
  Level level_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

WitnessTable build_witness_table(const Level& level, const AdmissibleTimes& admissible);
WitnessTable build_witness_table(const Level& level);

/// Gcd test first, then the smallest time witness.
ProperStatus classify_proper(const SpeedSet& set, const Level& level, const WitnessTable& table);

/// Re-checks a status against its defining condition using direct modular
/// arithmetic (no witness table). An Improper claim is checked exhaustively.
bool verify_status(const SpeedSet& set, const Level& level, const ProperStatus& status);

struct NodeStats {
  std::uint64_t examined = 0;  // size of the candidate space at the node
  std::uint64_t improper = 0;
  std::uint64_t visited = 0;   // search nodes actually expanded
  std::int64_t wall_ms = 0;

  /// improper / examined, reduced; 0 when nothing was examined.
  Rational survival() const;
};

struct ImproperCollection {
  Level level;
  Representation representation = Representation::literal;
  std::vector<SpeedSet> sets;  // sorted, unique
  NodeStats stats;

  bool empty() const { return sets.empty(); }
  bool contains(const SpeedSet& s) const;
};

/// Candidate sets at a level, not yet classified.
struct CandidateSet {
  Level level;
  Representation representation = Representation::literal;
  std::vector<SpeedSet> sets;
};

struct EngineOptions {
  Representation representation = Representation::literal;
  /// 0 selects the machine's hardware concurrency.
  unsigned workers = 1;
  /// Abort (ResourceLimit) when a node would hold more sets than this.
  std::uint64_t max_sets = 50'000'000;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Every improper set of size 1..k at the level.
ImproperCollection compute_improper_base(const Level& level, const EngineOptions& options = {});

/// delta_m of the collection: every set over B(m,p) of size |S|..k whose
/// reduction mod l*p is exactly a member S. Sorted and unique.
std::vector<SpeedSet> shadow(const ImproperCollection& collection, const Level& target);
void for_each_shadow(const ImproperCollection& collection, const Level& target,
                     const std::function<void(const SpeedSet&)>& visit);
/// Number of sets in the shadow of one source set without enumerating it.
std::uint64_t shadow_size(const SpeedSet& source, const Level& from, const Level& target,
                          Representation representation);

/// Classifies exactly the supplied candidates (deduplicated first).
ImproperCollection compute_improper_within(const Level& target, std::span<const SpeedSet> candidates,
                                           const EngineOptions& options = {});

/// compute_improper_within(target, shadow(source, target)) without
/// materializing the shadow.
ImproperCollection lift_improper(const ImproperCollection& source, const Level& target,
                                 const EngineOptions& options = {});

/// Sets present in both inputs. Levels and representations must agree.
CandidateSet intersect_candidates(const CandidateSet& a, const CandidateSet& b);

/// Improper sets inside the intersection of the parents' shadows at target,
/// streaming the intersection through a Chinese-remainder join.
ImproperCollection merge_improper(std::span<const ImproperCollection* const> parents, const Level& target,
                                  const EngineOptions& options = {});

struct NodeRecord {
  std::uint32_t ell = 0;
  NodeStats stats;
};

struct LadderRun {
  ImproperCollection final;
  std::vector<NodeRecord> nodes;  // ascending ell
  bool certificate_grade = false;
};

/// Executes the plan. Invalid plans are rejected; plans whose terminal is
/// not k+1 run but are reported as not certificate grade.
LadderRun run_ladder(const LadderPlan& plan, const EngineOptions& options = {});

}  // namespace lrc
