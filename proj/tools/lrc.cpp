// Command-line driver. Exit codes: 0 Empty / PROVEN / verified,
// 1 Nonempty / NOT-PROVEN / violations, 2 errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lrc/certify.hpp"
#include "lrc/engine.hpp"
#include "lrc/modmath.hpp"
#include "lrc/oracle.hpp"
#include "lrc/planner.hpp"

namespace fs = std::filesystem;
using namespace lrc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

struct RunConfig {
  int k = 0;
  std::uint64_t p = 0;
  std::uint64_t from = 0, to = 0;
  std::string plan;
  unsigned workers = 0;
  std::string out = ".";
  int verbosity = 0;
  bool no_oracle = false;
  bool literal = false;
  std::uint64_t max_sets = 50'000'000;
};

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--plan", cfg.plan, "ladder plan, e.g. 1>3>9 or '1>2>10 & 1>5>10'");
  cmd->add_option("--workers", cfg.workers, "worker threads, 0 for machine parallelism")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", cfg.out, "receipt directory");
  cmd->add_flag("--no-oracle", cfg.no_oracle, "skip tuple-level confirmation of nonempty results");
  cmd->add_flag("--literal", cfg.literal, "enumerate every residue instead of one per sign pair");
  cmd->add_option("--max-sets", cfg.max_sets, "abort when a node keeps more sets than this (0: no limit)");
  cmd->add_flag("-v,--verbose", cfg.verbosity, "more output");
}

CheckOptions check_options(const RunConfig& cfg) {
  CheckOptions o;
  o.engine.representation = cfg.literal ? Representation::literal : Representation::sign_reduced;
  o.engine.workers = cfg.workers;
  o.engine.max_sets = cfg.max_sets;
  o.oracle = !cfg.no_oracle;
  return o;
}

LadderPlan plan_for(const RunConfig& cfg, std::uint64_t p) {
  if (p > UINT32_MAX) throw std::invalid_argument("p out of range");
  const auto p32 = static_cast<std::uint32_t>(p);
  return cfg.plan.empty() ? default_plan(cfg.k, p32) : parse_plan(cfg.plan, cfg.k, p32);
}

std::string fixed_width(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

void print_nodes(const PrimeResult& r) {
  std::cout << fixed_width("ell", 6) << fixed_width("examined", 16) << fixed_width("improper", 12)
            << fixed_width("visited", 14) << "  " << "survival" << "  wall_ms\n";
  for (const auto& n : r.nodes) {
    const Rational s = n.stats.survival();
    std::ostringstream ratio;
    ratio.precision(3);
    ratio << std::scientific << static_cast<double>(s);  // display only
    std::cout << fixed_width(std::to_string(n.ell), 6) << fixed_width(std::to_string(n.stats.examined), 16)
              << fixed_width(std::to_string(n.stats.improper), 12) << fixed_width(std::to_string(n.stats.visited), 14)
              << "  " << ratio.str() << "  " << n.stats.wall_ms << "\n";
  }
}

int status_exit(PrimeStatus s) {
  switch (s) {
    case PrimeStatus::empty: return kExitOk;
    case PrimeStatus::nonempty: return kExitNegative;
    case PrimeStatus::aborted: return kExitError;
  }
  return kExitError;
}

PrimeResult run_and_write(const RunConfig& cfg, std::uint64_t p) {
  const LadderPlan plan = plan_for(cfg, p);
  for (const auto& w : validate_plan(plan).warnings) {
    if (cfg.verbosity > 0) std::cerr << "warning: " << w << "\n";
  }
  PrimeResult r = check_prime(cfg.k, p, plan, check_options(cfg));
  fs::create_directories(cfg.out);
  write_receipt(r, fs::path(cfg.out) / prime_receipt_name(cfg.k, p));
  return r;
}

int cmd_check(const RunConfig& cfg) {
  const PrimeResult r = run_and_write(cfg, cfg.p);
  std::cout << "k=" << r.k << " p=" << r.p << " plan=" << r.plan << " status=" << to_string(r.status);
  if (r.redundant()) std::cout << " (redundant: p <= k+1)";
  std::cout << "\n";
  if (r.evidence) std::cout << "evidence " << to_string(r.evidence->values) << " (oracle-confirmed)\n";
  if (r.status == PrimeStatus::aborted) std::cout << "aborted: " << r.abort_reason << "\n";
  print_nodes(r);
  return status_exit(r.status);
}

int cmd_scan(const RunConfig& cfg) {
  if (cfg.from > cfg.to) throw std::invalid_argument("--from must not exceed --to");
  const auto primes = primes_in_range(cfg.from, cfg.to);
  std::cout << fixed_width("p", 6) << "  " << "status  " << fixed_width("terminal_examined", 18)
            << fixed_width("wall_ms", 10) << "\n";
  bool any_nonempty = false, any_error = false;
  for (auto p : primes) {
    std::string status;
    std::string examined = "-";
    std::int64_t wall = 0;
    try {
      const PrimeResult r = run_and_write(cfg, p);
      status = to_string(r.status);
      if (!r.nodes.empty()) examined = std::to_string(r.nodes.back().stats.examined);
      for (const auto& n : r.nodes) wall += n.stats.wall_ms;
      any_nonempty = any_nonempty || r.status == PrimeStatus::nonempty;
      any_error = any_error || r.status == PrimeStatus::aborted;
    } catch (const std::exception& e) {
      status = "Error";
      any_error = true;
      std::cerr << "p=" << p << ": " << e.what() << "\n";
    }
    std::cout << fixed_width(std::to_string(p), 6) << "  " << status << std::string(8 - std::min<std::size_t>(8, status.size()), ' ')
              << fixed_width(examined, 18) << fixed_width(std::to_string(wall), 10) << "\n";
    std::cout.flush();
  }
  if (any_error) return kExitError;
  return any_nonempty ? kExitNegative : kExitOk;
}

std::vector<std::uint64_t> read_primes_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      const auto v = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("bad entry '" + tok + "' in " + path.string());
      out.push_back(v);
    }
  }
  return out;
}

struct CertifyConfig {
  RunConfig run;
  std::string primes_file;
  std::string assume;
  bool run_missing = false;
};

int cmd_certify(const CertifyConfig& cfg) {
  const int k = cfg.run.k;
  Assumption assumption = BaseAssumption{};
  if (!cfg.assume.empty()) {
    const auto j = read_receipt(cfg.assume);
    const Verdict v = verify_receipt(j);
    if (!v.ok()) {
      for (const auto& x : v.violations) std::cerr << "assumption: " << x.name << ": " << x.detail << "\n";
      throw ChainError("assumption receipt " + cfg.assume + " does not verify");
    }
    assumption = std::make_shared<const Certificate>(certificate_from_json(j));
  }
  std::string why;
  if (!assumption_covers(assumption, k, &why)) throw ChainError("broken assumption chain: " + why);

  std::vector<PrimeResult> results;
  for (auto p : read_primes_file(cfg.primes_file)) {
    const fs::path path = fs::path(cfg.run.out) / prime_receipt_name(k, p);
    if (!fs::exists(path)) {
      if (!cfg.run_missing) throw std::runtime_error("missing receipt " + path.string() + " (use --run)");
      run_and_write(cfg.run, p);
    }
    const auto j = read_receipt(path);
    const Verdict v = verify_receipt(j);
    if (!v.ok()) {
      for (const auto& x : v.violations) std::cerr << path.string() << ": " << x.name << ": " << x.detail << "\n";
      throw std::runtime_error("receipt " + path.string() + " does not verify");
    }
    results.push_back(prime_result_from_json(j));
  }
  const Certificate c = build_certificate(k, std::move(results), std::move(assumption));
  fs::create_directories(cfg.run.out);
  const fs::path dest = fs::path(cfg.run.out) / certificate_receipt_name(k);
  write_receipt(c, dest);
  std::cout << (c.proven ? "PROVEN" : "NOT-PROVEN") << " k=" << k << " primes=" << c.primes.size() << "\n";
  std::cout << "product " << c.product.str() << " (" << decimal_digits(c.product) << " digits)\n";
  std::cout << "bound   " << c.bound.str() << " (" << decimal_digits(c.bound) << " digits)\n";
  std::cout << "receipt " << dest.string() << "\n";
  return c.proven ? kExitOk : kExitNegative;
}

int cmd_bound(int k) {
  const BoundValue b = bound_C(k);
  std::cout << b.value.str() << "\n";
  std::cout << "digits " << decimal_digits(b.value) << "\n";
  if (!b.integral) std::cout << "inner value is not an integer; floored before exponentiation\n";
  return kExitOk;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  auto whole = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("malformed rational '" + text + "'");
    }
    return BigInt(s);
  };
  if (slash == std::string::npos) return Rational(whole(text));
  const BigInt den = whole(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Rational(whole(text.substr(0, slash)), den);
}

std::string rational_text(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

int cmd_oracle(const std::vector<std::string>& speed_text, const std::string& threshold_text) {
  std::vector<std::uint64_t> speeds;
  for (const auto& s : speed_text) {
    std::size_t used = 0;
    if (s.empty() || s[0] == '-') throw std::invalid_argument("malformed speed '" + s + "'");
    const auto v = std::stoull(s, &used);
    if (used != s.size() || v == 0) throw std::invalid_argument("malformed speed '" + s + "'");
    speeds.push_back(v);
  }
  const Rational threshold =
      threshold_text.empty() ? Rational(1, static_cast<long long>(speeds.size()) + 1) : parse_rational(threshold_text);
  const LonelyDecision d = lrc_decide(speeds, threshold);
  if (d.exists) {
    std::cout << "exists witness t=" << rational_text(*d.witness) << "\n";
  } else {
    std::cout << "not-exists threshold=" << rational_text(threshold) << "\n";
  }
  return d.exists ? kExitOk : kExitNegative;
}

int cmd_verify(const std::string& file, bool rerun, unsigned workers) {
  VerifyOptions o;
  o.rerun = rerun;
  o.engine.workers = workers;
  const Verdict v = verify_receipt_file(file, o);
  std::cout << (v.ok() ? "verified" : "violations") << " kind=" << v.kind << "\n";
  for (const auto& x : v.violations) std::cout << "violation: " << x.name << ": " << x.detail << "\n";
  for (const auto& n : v.notes) std::cout << "note: " << n << "\n";
  return v.ok() ? kExitOk : kExitNegative;
}

int cmd_plan(const RunConfig& cfg, const std::vector<std::string>& survival_text) {
  const LadderPlan plan = plan_for(cfg, cfg.p);
  const PlanReport report = validate_plan(plan);
  std::cout << "plan " << plan.to_string() << (report.ok() ? " ok" : " invalid") << "\n";
  for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
  for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
  if (report.ok() && !survival_text.empty()) {
    std::vector<Rational> survival;
    for (const auto& s : survival_text) survival.push_back(parse_rational(s));
    const CostEstimate e = estimate_cost(plan, survival);
    std::cout << "estimated checks " << rational_text(e.checks) << (e.heuristic ? " (heuristic)" : "") << "\n";
  }
  return report.ok() ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sieve-ladder checks for lonely runner counterexamples"};
  app.require_subcommand(1);

  RunConfig check_cfg;
  auto* check = app.add_subcommand("check", "check one prime and write its receipt");
  check->add_option("--k", check_cfg.k, "number of nonzero speeds")->required()->check(CLI::Range(2, 16));
  check->add_option("--p", check_cfg.p, "prime")->required();
  add_run_options(check, check_cfg);

  RunConfig scan_cfg;
  auto* scan = app.add_subcommand("scan", "check every prime in a range");
  scan->add_option("--k", scan_cfg.k, "number of nonzero speeds")->required()->check(CLI::Range(2, 16));
  scan->add_option("--from", scan_cfg.from, "smallest candidate")->required();
  scan->add_option("--to", scan_cfg.to, "largest candidate")->required();
  add_run_options(scan, scan_cfg);

  CertifyConfig cert_cfg;
  auto* certify = app.add_subcommand("certify", "assemble a certificate from prime receipts");
  certify->add_option("--k", cert_cfg.run.k, "number of nonzero speeds")->required()->check(CLI::Range(2, 16));
  certify->add_option("--primes", cert_cfg.primes_file, "one prime per line, '#' comments")->required();
  certify->add_option("--assume", cert_cfg.assume, "certificate receipt for k-1");
  certify->add_flag("--run", cert_cfg.run_missing, "produce missing prime receipts");
  add_run_options(certify, cert_cfg.run);

  int bound_k = 0;
  auto* bound = app.add_subcommand("bound", "print C_k exactly");
  bound->add_option("--k", bound_k, "number of nonzero speeds")->required()->check(CLI::Range(2, 1000));

  std::vector<std::string> speeds;
  std::string threshold;
  auto* oracle = app.add_subcommand("oracle", "decide the lonely runner property for explicit speeds");
  oracle->add_option("--speeds", speeds, "comma-separated positive speeds")->required()->delimiter(',');
  oracle->add_option("--threshold", threshold, "rational threshold (default 1/(n+1))");

  std::string verify_file;
  bool rerun = false;
  unsigned verify_workers = 0;
  auto* verify = app.add_subcommand("verify", "re-check a receipt");
  verify->add_option("receipt", verify_file, "receipt file")->required();
  verify->add_flag("--rerun", rerun, "re-run the ladder for prime receipts");
  verify->add_option("--workers", verify_workers, "worker threads for --rerun, 0 for machine parallelism")->check(CLI::NonNegativeNumber);

  RunConfig plan_cfg;
  std::vector<std::string> survival;
  auto* plan = app.add_subcommand("plan", "validate a plan and estimate its cost");
  plan->add_option("--k", plan_cfg.k, "number of nonzero speeds")->required()->check(CLI::Range(2, 16));
  plan->add_option("--p", plan_cfg.p, "prime")->required();
  plan->add_option("--plan", plan_cfg.plan, "ladder plan");
  plan->add_option("--survival", survival, "survival ratios, one per non-terminal node")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*check) return cmd_check(check_cfg);
    if (*scan) return cmd_scan(scan_cfg);
    if (*certify) return cmd_certify(cert_cfg);
    if (*bound) return cmd_bound(bound_k);
    if (*oracle) return cmd_oracle(speeds, threshold);
    if (*verify) return cmd_verify(verify_file, rerun, verify_workers);
    if (*plan) return cmd_plan(plan_cfg, survival);
  } catch (const ChainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
