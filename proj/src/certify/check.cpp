#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lrc/certify.hpp"

namespace lrc {

std::string to_string(PrimeStatus s) {
  switch (s) {
    case PrimeStatus::empty: return "Empty";
    case PrimeStatus::nonempty: return "Nonempty";
    case PrimeStatus::aborted: return "Aborted";
  }
  return "?";
}

PrimeStatus parse_prime_status(std::string_view text) {
  if (text == "Empty") return PrimeStatus::empty;
  if (text == "Nonempty") return PrimeStatus::nonempty;
  if (text == "Aborted") return PrimeStatus::aborted;
  throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

EvidenceAudit audit_improper(const SpeedSet& set, const Level& level) {
  const std::uint64_t n = level.modulus();
  EvidenceAudit audit;
  std::uint64_t g = n;
  for (std::size_t i = 0; i < set.size(); ++i) g = std::gcd(g, std::uint64_t{set[i]});
  audit.common_gcd = static_cast<std::uint32_t>(g);
  if (set.size() == static_cast<std::size_t>(level.k())) {
    for (std::size_t skip = 0; skip < set.size(); ++skip) {
      std::uint64_t h = n;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (i != skip) h = std::gcd(h, std::uint64_t{set[i]});
      }
      audit.removal_gcds.push_back(static_cast<std::uint32_t>(h));
    }
  }
  audit.killers.reserve(n);
  for (std::uint64_t t = 0; t < n; ++t) {
    Residue killer = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!is_admissible(t * set[i] % n, n, level.k())) {
        killer = set[i];
        break;
      }
    }
    audit.killers.push_back(killer);  // 0 would mean t is a witness
  }
  return audit;
}

namespace {

// Size-k members first: they represent a single distinct-value tuple.
std::vector<const SpeedSet*> evidence_order(const ImproperCollection& c, int k) {
  std::vector<const SpeedSet*> order;
  for (const auto& s : c.sets) order.push_back(&s);
  std::stable_partition(order.begin(), order.end(),
                        [k](const SpeedSet* s) { return s->size() == static_cast<std::size_t>(k); });
  return order;
}

}  // namespace

PrimeResult check_prime(int k, std::uint64_t p, const LadderPlan& plan, const CheckOptions& options) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (plan.k != k || plan.p != p) throw std::invalid_argument("plan was built for different k or p");
  if (!validate_plan(plan).ok()) throw std::invalid_argument("invalid plan " + plan.to_string());
  if (options.require_certificate_grade && !is_certificate_grade(plan)) {
    throw std::invalid_argument("plan " + plan.to_string() + " does not end at l = k+1");
  }

  PrimeResult result;
  result.k = k;
  result.p = p;
  result.plan = plan.to_string();
  result.representation = options.engine.representation;
  result.certificate_grade = is_certificate_grade(plan);

  std::optional<LadderRun> run;
  try {
    run = run_ladder(plan, options.engine);
  } catch (const ResourceLimit& e) {
    result.status = PrimeStatus::aborted;
    result.abort_reason = e.what();
    return result;
  }
  result.nodes = run->nodes;
  const ImproperCollection& final = run->final;
  if (final.empty()) {
    result.status = PrimeStatus::empty;
    return result;
  }

  const Level level = final.level;
  const WitnessTable table = build_witness_table(level);
  std::size_t attempts = 0;
  for (const SpeedSet* s : evidence_order(final, k)) {
    if (attempts++ == options.evidence_attempts) break;
    // Independent re-check of the engine's verdict before asking the oracle.
    if (!is_improper(classify_proper(*s, level, table)) || !verify_status(*s, level, Improper{})) {
      throw Error("engine returned " + to_string(*s) + " which does not re-verify as improper");
    }
    const bool full = s->size() == static_cast<std::size_t>(k);
    std::optional<TupleSpeedSet> tuple;
    if (options.oracle) {
      tuple = confirm_improper_evidence(*s, level).tuple;
    } else if (full) {
      // k distinct values: the set is its own only tuple.
      tuple = TupleSpeedSet{s->to_vector()};
    } else {
      break;
    }
    if (!tuple) continue;
    result.status = PrimeStatus::nonempty;
    result.evidence = Evidence{level.ell(), *s, audit_improper(*s, level), *tuple};
    return result;
  }
  result.status = PrimeStatus::aborted;
  result.abort_reason = "unconfirmed: no improper member was confirmed at tuple level";
  return result;
}

}  // namespace lrc
