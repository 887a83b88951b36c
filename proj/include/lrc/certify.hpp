#pragma once

// Per-prime results, certificates with explicit assumption chains, and
// receipts (hashed JSON records) with an independent verifier.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lrc/engine.hpp"
#include "lrc/modmath.hpp"
#include "lrc/oracle.hpp"
#include "lrc/planner.hpp"

namespace lrc {

inline constexpr const char* kEngineVersion = "lrc-engine 1.0.0";
inline constexpr int kSchemaVersion = 1;
/// Largest k for which the conjecture is taken as known.
inline constexpr int kKnownUpTo = 7;

enum class PrimeStatus { empty, nonempty, aborted };
std::string to_string(PrimeStatus s);
PrimeStatus parse_prime_status(std::string_view text);

/// Why a support is improper at the terminal level, in checkable form.
struct EvidenceAudit {
  /// gcd(values, N) and, for a size-k set, gcd with N after each removal.
  std::uint32_t common_gcd = 0;
  std::vector<std::uint32_t> removal_gcds;
  /// killers[t]: a value whose t-multiple is inadmissible, for t in [0, N).
  std::vector<Residue> killers;
};

struct Evidence {
  std::uint32_t ell = 0;  // level of the evidence: the plan's terminal
  SpeedSet values;
  EvidenceAudit audit;
  TupleSpeedSet tuple;  // improper k-tuple with this support
};

EvidenceAudit audit_improper(const SpeedSet& set, const Level& level);

struct PrimeResult {
  int k = 0;
  std::uint64_t p = 0;
  std::string plan;
  Representation representation = Representation::sign_reduced;
  PrimeStatus status = PrimeStatus::aborted;
  std::vector<NodeRecord> nodes;
  std::optional<Evidence> evidence;
  std::string abort_reason;
  std::string engine_version = kEngineVersion;
  bool deterministic = true;
  bool certificate_grade = true;

  /// p <= k+1: trivially empty (t = l is a witness for every set).
  bool redundant() const { return p <= static_cast<std::uint64_t>(k) + 1; }
};

struct CheckOptions {
  EngineOptions engine{Representation::sign_reduced, 1, 50'000'000};
  /// Confirm nonempty results at tuple level. Without it only size-k
  /// members (which need no multiplicity analysis) can serve as evidence.
  bool oracle = true;
  /// Members tried as evidence before giving up.
  std::size_t evidence_attempts = 1000;
  /// Refuse plans whose terminal is not k+1. Off only for experiments.
  bool require_certificate_grade = true;
};

/// Runs the plan for (k, p). Throws std::invalid_argument for a composite p,
/// an invalid plan or (by default) one that is not certificate grade;
/// resource guards give Aborted.
PrimeResult check_prime(int k, std::uint64_t p, const LadderPlan& plan, const CheckOptions& options = {});

struct Certificate;

/// The conjecture holds for every k <= max_k by prior work.
struct BaseAssumption {
  int max_k = kKnownUpTo;
};

using Assumption = std::variant<BaseAssumption, std::shared_ptr<const Certificate>>;

struct PrimeSummary {
  std::uint64_t p = 0;
  std::string plan;
  std::string content_hash;  // of the prime's receipt
};

struct Certificate {
  int k = 0;
  std::vector<std::uint64_t> primes;  // ascending
  std::vector<PrimeSummary> results;  // same order as primes
  BigInt product;
  BigInt bound;
  bool bound_integral = true;
  bool exceeds = false;
  bool proven = false;
  Assumption assumption;
  std::string engine_version = kEngineVersion;
};

class ChainError : public Error {
 public:
  using Error::Error;
};

/// True when the assumption establishes the conjecture for k-1 speeds.
bool assumption_covers(const Assumption& assumption, int k, std::string* why = nullptr);

/// Throws std::invalid_argument for mixed k, non-empty results or duplicate
/// primes, and ChainError when the assumption does not cover k-1.
Certificate build_certificate(int k, std::vector<PrimeResult> results, Assumption assumption);

// Receipts.

nlohmann::json to_json(const PrimeResult& result);
nlohmann::json to_json(const Certificate& certificate);
PrimeResult prime_result_from_json(const nlohmann::json& j);
Certificate certificate_from_json(const nlohmann::json& j);

/// Compact dump with sorted keys, timing fields dropped and the digest
/// blanked.
std::string canonical_serialization(const nlohmann::json& receipt);
std::string sha256_hex(std::string_view data);
/// Fills in content_hash; the stored form is the canonical form plus hash.
nlohmann::json seal(nlohmann::json receipt);
std::string render_receipt(const nlohmann::json& sealed);

void write_receipt(const PrimeResult& result, const std::filesystem::path& destination);
void write_receipt(const Certificate& certificate, const std::filesystem::path& destination);
nlohmann::json read_receipt(const std::filesystem::path& source);

std::string prime_receipt_name(int k, std::uint64_t p);
std::string certificate_receipt_name(int k);

struct Violation {
  std::string name;
  std::string detail;
};

struct Verdict {
  std::string kind;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
};

struct VerifyOptions {
  /// Re-run the ladder for prime receipts and compare the node counts.
  bool rerun = false;
  EngineOptions engine{Representation::sign_reduced, 1, 50'000'000};
};

Verdict verify_receipt(const nlohmann::json& receipt, const VerifyOptions& options = {});
Verdict verify_receipt_file(const std::filesystem::path& source, const VerifyOptions& options = {});

}  // namespace lrc
