// Receipt format: one JSON document per file. The content hash is SHA-256
// over the canonical form (compact, sorted keys, wall_ms fields removed,
// digest blanked), so timing never affects it.

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "lrc/certify.hpp"

namespace lrc {

using nlohmann::json;

namespace {

std::string fraction_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

json values_json(const SpeedSet& s) { return json(s.to_vector()); }

SpeedSet speed_set_from(const json& j) { return SpeedSet::from_unsorted(j.get<std::vector<Residue>>()); }

BigInt big_from(const json& j) {
  const auto text = j.get<std::string>();
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not a decimal integer: '" + text + "'");
  }
  return BigInt(text);
}

void strip_timing(json& j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [key, value] : j.items()) strip_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_timing(value);
  }
}

json assumption_json(const Assumption& a) {
  if (const auto* base = std::get_if<BaseAssumption>(&a)) {
    return {{"type", "base"},
            {"max_k", base->max_k},
            {"statement", "the conjecture holds for every k <= " + std::to_string(base->max_k)}};
  }
  const auto& prior = std::get<std::shared_ptr<const Certificate>>(a);
  if (!prior) throw std::invalid_argument("missing prior certificate");
  return {{"type", "certificate"}, {"certificate", seal(to_json(*prior))}};
}

Assumption assumption_from(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "base") return BaseAssumption{j.at("max_k").get<int>()};
  if (type == "certificate") {
    return std::make_shared<const Certificate>(certificate_from_json(j.at("certificate")));
  }
  throw std::invalid_argument("unknown assumption type '" + type + "'");
}

}  // namespace

json to_json(const PrimeResult& r) {
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    nodes.push_back({{"ell", n.ell},
                     {"examined", n.stats.examined},
                     {"improper", n.stats.improper},
                     {"visited", n.stats.visited},
                     {"survival", fraction_string(n.stats.survival())},
                     {"wall_ms", n.stats.wall_ms}});
  }
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "prime-result"},
            {"k", r.k},
            {"p", r.p},
            {"plan", r.plan},
            {"representation", to_string(r.representation)},
            {"status", to_string(r.status)},
            {"redundant", r.redundant()},
            {"deterministic", r.deterministic},
            {"certificate_grade", r.certificate_grade},
            {"engine_version", r.engine_version},
            {"nodes", nodes},
            {"content_hash", {{"algorithm", "sha256"}, {"digest", ""}}}};
  if (r.status == PrimeStatus::aborted) j["abort_reason"] = r.abort_reason;
  if (r.evidence) {
    const auto& e = *r.evidence;
    j["evidence"] = {{"values", values_json(e.values)},
                     {"level", {{"k", r.k}, {"ell", e.ell}, {"p", r.p}}},
                     {"claimed_status", "Improper"},
                     {"audit",
                      {{"common_gcd", e.audit.common_gcd},
                       {"removal_gcds", e.audit.removal_gcds},
                       {"killers", e.audit.killers}}},
                     {"oracle_tuple", e.tuple.entries}};
  }
  return j;
}

json to_json(const Certificate& c) {
  json results = json::array();
  for (const auto& s : c.results) results.push_back({{"p", s.p}, {"plan", s.plan}, {"content_hash", s.content_hash}});
  std::vector<std::uint64_t> redundant;
  for (auto p : c.primes) {
    if (p <= static_cast<std::uint64_t>(c.k) + 1) redundant.push_back(p);
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "certificate"},
          {"k", c.k},
          {"primes", c.primes},
          {"redundant_primes", redundant},
          {"results", results},
          {"product", c.product.str()},
          {"bound", c.bound.str()},
          {"bound_integral", c.bound_integral},
          {"exceeds", c.exceeds},
          {"status", c.proven ? "PROVEN" : "NOT-PROVEN"},
          {"assumption", assumption_json(c.assumption)},
          {"engine_version", c.engine_version},
          {"content_hash", {{"algorithm", "sha256"}, {"digest", ""}}}};
}

PrimeResult prime_result_from_json(const json& j) {
  if (j.at("kind").get<std::string>() != "prime-result") throw std::invalid_argument("not a prime-result receipt");
  PrimeResult r;
  r.k = j.at("k").get<int>();
  r.p = j.at("p").get<std::uint64_t>();
  r.plan = j.at("plan").get<std::string>();
  r.representation = parse_representation(j.at("representation").get<std::string>());
  r.status = parse_prime_status(j.at("status").get<std::string>());
  r.deterministic = j.at("deterministic").get<bool>();
  r.certificate_grade = j.at("certificate_grade").get<bool>();
  r.engine_version = j.at("engine_version").get<std::string>();
  for (const auto& n : j.at("nodes")) {
    NodeRecord rec;
    rec.ell = n.at("ell").get<std::uint32_t>();
    rec.stats.examined = n.at("examined").get<std::uint64_t>();
    rec.stats.improper = n.at("improper").get<std::uint64_t>();
    rec.stats.visited = n.at("visited").get<std::uint64_t>();
    rec.stats.wall_ms = n.value("wall_ms", std::int64_t{0});
    r.nodes.push_back(rec);
  }
  if (j.contains("abort_reason")) r.abort_reason = j.at("abort_reason").get<std::string>();
  if (j.contains("evidence")) {
    const auto& e = j.at("evidence");
    Evidence ev;
    ev.ell = e.at("level").at("ell").get<std::uint32_t>();
    ev.values = speed_set_from(e.at("values"));
    ev.audit.common_gcd = e.at("audit").at("common_gcd").get<std::uint32_t>();
    ev.audit.removal_gcds = e.at("audit").at("removal_gcds").get<std::vector<std::uint32_t>>();
    ev.audit.killers = e.at("audit").at("killers").get<std::vector<Residue>>();
    ev.tuple.entries = e.at("oracle_tuple").get<std::vector<Residue>>();
    r.evidence = std::move(ev);
  }
  return r;
}

Certificate certificate_from_json(const json& j) {
  if (j.at("kind").get<std::string>() != "certificate") throw std::invalid_argument("not a certificate receipt");
  Certificate c;
  c.k = j.at("k").get<int>();
  c.primes = j.at("primes").get<std::vector<std::uint64_t>>();
  for (const auto& s : j.at("results")) {
    c.results.push_back(
        {s.at("p").get<std::uint64_t>(), s.at("plan").get<std::string>(), s.at("content_hash").get<std::string>()});
  }
  c.product = big_from(j.at("product"));
  c.bound = big_from(j.at("bound"));
  c.bound_integral = j.at("bound_integral").get<bool>();
  c.exceeds = j.at("exceeds").get<bool>();
  c.proven = j.at("status").get<std::string>() == "PROVEN";
  c.assumption = assumption_from(j.at("assumption"));
  c.engine_version = j.at("engine_version").get<std::string>();
  return c;
}

std::string canonical_serialization(const json& receipt) {
  json copy = receipt;
  strip_timing(copy);
  copy["content_hash"] = {{"algorithm", "sha256"}, {"digest", ""}};
  return copy.dump();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

json seal(json receipt) {
  receipt["content_hash"] = {{"algorithm", "sha256"}, {"digest", sha256_hex(canonical_serialization(receipt))}};
  return receipt;
}

std::string render_receipt(const json& sealed) { return sealed.dump() + "\n"; }

namespace {

void write_text(const std::filesystem::path& destination, const std::string& text) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + destination.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + destination.string());
}

}  // namespace

void write_receipt(const PrimeResult& result, const std::filesystem::path& destination) {
  write_text(destination, render_receipt(seal(to_json(result))));
}

void write_receipt(const Certificate& certificate, const std::filesystem::path& destination) {
  write_text(destination, render_receipt(seal(to_json(certificate))));
}

json read_receipt(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error("cannot open " + source.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(source.string() + ": " + e.what());
  }
}

std::string prime_receipt_name(int k, std::uint64_t p) {
  return "prime-k" + std::to_string(k) + "-p" + std::to_string(p) + ".json";
}

std::string certificate_receipt_name(int k) { return "certificate-k" + std::to_string(k) + ".json"; }

namespace {

class Checker {
 public:
  explicit Checker(Verdict& v) : v_(v) {}
  void require(bool ok, const std::string& name, const std::string& detail) {
    if (!ok) v_.violations.push_back({name, detail});
  }

 private:
  Verdict& v_;
};

void verify_hash(const json& receipt, Checker& check) {
  const auto& h = receipt.at("content_hash");
  check.require(h.at("algorithm").get<std::string>() == "sha256", "content-hash", "unsupported algorithm");
  const auto expected = sha256_hex(canonical_serialization(receipt));
  check.require(h.at("digest").get<std::string>() == expected, "content-hash",
                "digest does not match the canonical serialization");
}

void verify_prime(const json& j, const VerifyOptions& options, Verdict& verdict, Checker& check) {
  const PrimeResult r = prime_result_from_json(j);
  check.require(r.k >= 2, "structure", "k must be at least 2");
  check.require(is_prime(r.p), "primality", std::to_string(r.p) + " is not prime");
  check.require(j.at("redundant").get<bool>() == r.redundant(), "redundant-flag", "inconsistent with p <= k+1");
  if (r.redundant()) verdict.notes.push_back("p <= k+1: redundant prime (trivially empty)");

  std::optional<LadderPlan> plan;
  try {
    plan = parse_plan(r.plan, r.k, static_cast<std::uint32_t>(r.p));
  } catch (const std::exception& e) {
    check.require(false, "plan", e.what());
  }
  if (plan) {
    check.require(validate_plan(*plan).ok(), "plan", "plan " + r.plan + " is not valid");
    check.require(is_certificate_grade(*plan) == r.certificate_grade, "plan", "certificate_grade flag is wrong");
    if (!r.certificate_grade) verdict.notes.push_back("plan " + r.plan + " does not end at k+1 (experimental run)");
    if (r.status != PrimeStatus::aborted) {
      std::vector<std::uint32_t> ells;
      for (const auto& n : r.nodes) ells.push_back(n.ell);
      check.require(ells == plan->nodes(), "node-stats", "node list does not match the plan");
    }
  }
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const auto& n = r.nodes[i];
    check.require(n.stats.improper <= n.stats.examined, "node-stats",
                  "node " + std::to_string(n.ell) + " keeps more sets than it examined");
    const auto expected = fraction_string(n.stats.survival());
    check.require(j.at("nodes")[i].at("survival").get<std::string>() == expected, "node-stats",
                  "node " + std::to_string(n.ell) + " survival is not improper/examined");
  }

  switch (r.status) {
    case PrimeStatus::empty:
      check.require(!r.nodes.empty() && r.nodes.back().stats.improper == 0, "status",
                    "Empty but the terminal node keeps sets");
      check.require(!r.evidence, "status", "Empty result carries evidence");
      verdict.notes.push_back("emptiness is reproducible, not re-derived (re-run the ladder to re-derive it)");
      break;
    case PrimeStatus::nonempty: {
      check.require(!r.nodes.empty() && r.nodes.back().stats.improper > 0, "status",
                    "Nonempty but the terminal node is empty");
      check.require(r.evidence.has_value(), "evidence", "Nonempty result without evidence");
      if (!r.evidence) break;
      const auto& e = *r.evidence;
      if (!plan) break;
      const Level level(r.k, plan->terminal(), static_cast<std::uint32_t>(r.p));
      const auto& lj = j.at("evidence").at("level");
      check.require(lj.at("k").get<int>() == r.k && lj.at("ell").get<std::uint32_t>() == level.ell() &&
                        lj.at("p").get<std::uint64_t>() == r.p,
                    "evidence", "evidence level is not the plan's terminal level");
      try {
        check_set(e.values, level, Representation::literal);
      } catch (const std::exception& ex) {
        check.require(false, "evidence", ex.what());
        break;
      }
      const ProperStatus status = classify_proper(e.values, level, build_witness_table(level));
      check.require(is_improper(status), "evidence", "evidence classifies as " + to_string(status));
      const auto audit = audit_improper(e.values, level);
      check.require(audit.common_gcd == e.audit.common_gcd && audit.removal_gcds == e.audit.removal_gcds &&
                        audit.killers == e.audit.killers,
                    "audit", "audit trace does not match a recomputation");
      check.require(std::find(audit.killers.begin(), audit.killers.end(), Residue{0}) == audit.killers.end(),
                    "audit", "some time is not killed");
      TupleSpeedSet t = e.tuple;
      std::sort(t.entries.begin(), t.entries.end());
      const bool support_ok = t.support() == e.values.to_vector() && t.entries.size() == static_cast<std::size_t>(r.k);
      check.require(support_ok, "oracle", "oracle tuple does not have the evidence as support");
      if (support_ok) check.require(is_tuple_improper(t.entries, level), "oracle", "oracle tuple is proper");
      break;
    }
    case PrimeStatus::aborted:
      verdict.notes.push_back("aborted: " + r.abort_reason);
      break;
  }

  if (options.rerun && plan && validate_plan(*plan).ok() && is_prime(r.p)) {
    CheckOptions co;
    co.require_certificate_grade = false;
    co.engine = options.engine;
    co.engine.representation = r.representation;
    const PrimeResult again = check_prime(r.k, r.p, *plan, co);
    bool same = again.status == r.status && again.nodes.size() == r.nodes.size();
    for (std::size_t i = 0; same && i < r.nodes.size(); ++i) {
      const auto &a = again.nodes[i].stats, &b = r.nodes[i].stats;
      same = again.nodes[i].ell == r.nodes[i].ell && a.examined == b.examined && a.improper == b.improper &&
             a.visited == b.visited;
    }
    check.require(same, "rerun-mismatch", "re-running the ladder gave different results");
    if (same) verdict.notes.push_back("re-derived by re-running the ladder");
  }
}

void verify_certificate(const json& j, const VerifyOptions& options, Verdict& verdict, Checker& check) {
  const Certificate c = certificate_from_json(j);
  bool sorted = std::is_sorted(c.primes.begin(), c.primes.end()) &&
                std::adjacent_find(c.primes.begin(), c.primes.end()) == c.primes.end();
  check.require(sorted, "structure", "primes must be ascending and distinct");
  bool all_prime = true;
  BigInt product = 1;
  for (auto p : c.primes) {
    if (!is_prime(p)) {
      check.require(false, "primality", std::to_string(p) + " is not prime");
      all_prime = false;
    }
    product *= p;
  }
  check.require(product == c.product, "product-mismatch", "recomputed product differs from the stated product");
  const BoundValue bound = bound_C(c.k);
  check.require(bound.value == c.bound, "bound-mismatch", "recomputed C_k differs from the stated bound");
  check.require(bound.integral == c.bound_integral, "bound-mismatch", "integrality flag is wrong");
  const bool exceeds = product > bound.value;
  check.require(exceeds == c.exceeds, "exceeds-mismatch", "stated comparison does not match the recomputation");
  check.require(c.proven == (exceeds && all_prime), "status-mismatch", "PROVEN must mean product > bound");

  std::vector<std::uint64_t> listed;
  for (const auto& s : c.results) listed.push_back(s.p);
  check.require(listed == c.primes, "results-mismatch", "per-prime summaries do not match the prime list");
  std::vector<std::uint64_t> redundant;
  for (auto p : c.primes) {
    if (p <= static_cast<std::uint64_t>(c.k) + 1) redundant.push_back(p);
  }
  check.require(j.at("redundant_primes").get<std::vector<std::uint64_t>>() == redundant, "redundant-flag",
                "redundant prime list is wrong");

  const auto& aj = j.at("assumption");
  if (aj.at("type").get<std::string>() == "certificate") {
    const Verdict inner = verify_receipt(aj.at("certificate"), options);
    for (const auto& v : inner.violations) check.require(false, "assumption:" + v.name, v.detail);
  }
  std::string why;
  check.require(assumption_covers(c.assumption, c.k, &why), "broken-chain", why);
  verdict.notes.push_back("per-prime emptiness is taken from the listed receipts");
}

}  // namespace

Verdict verify_receipt(const json& receipt, const VerifyOptions& options) {
  Verdict verdict;
  Checker check(verdict);
  try {
    verdict.kind = receipt.at("kind").get<std::string>();
    check.require(receipt.at("schema_version").get<int>() == kSchemaVersion, "schema", "unsupported schema version");
    verify_hash(receipt, check);
    if (verdict.kind == "prime-result") {
      verify_prime(receipt, options, verdict, check);
    } else if (verdict.kind == "certificate") {
      verify_certificate(receipt, options, verdict, check);
    } else {
      check.require(false, "structure", "unknown kind '" + verdict.kind + "'");
    }
  } catch (const ResourceLimit& e) {
    check.require(false, "rerun-aborted", e.what());
  } catch (const std::exception& e) {
    check.require(false, "structure", e.what());
  }
  return verdict;
}

Verdict verify_receipt_file(const std::filesystem::path& source, const VerifyOptions& options) {
  return verify_receipt(read_receipt(source), options);
}

}  // namespace lrc
