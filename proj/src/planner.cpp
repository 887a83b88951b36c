#include "lrc/planner.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace lrc {

std::vector<std::uint32_t> LadderPlan::nodes() const {
  std::set<std::uint32_t> s;
  for (const auto& b : branches) s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> LadderPlan::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& b : branches) {
    for (std::size_t i = 1; i < b.size(); ++i) {
      std::pair e{b[i - 1], b[i]};
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
  }
  return out;
}

std::vector<std::uint32_t> LadderPlan::parents(std::uint32_t ell) const {
  std::set<std::uint32_t> s;
  for (const auto& [from, to] : edges()) {
    if (to == ell) s.insert(from);
  }
  return {s.begin(), s.end()};
}

std::uint32_t LadderPlan::terminal() const {
  const auto n = nodes();
  return n.empty() ? 0 : n.back();
}

std::string LadderPlan::to_string() const {
  std::string out;
  for (std::size_t bi = 0; bi < branches.size(); ++bi) {
    if (bi) out += " & ";
    for (std::size_t i = 0; i < branches[bi].size(); ++i) {
      if (i) out += '>';
      out += std::to_string(branches[bi][i]);
    }
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

LadderPlan parse_plan(std::string_view text, int k, std::uint32_t p) {
  LadderPlan plan{k, p, {}};
  if (trim(text).empty()) throw std::invalid_argument("plan: empty text");
  for (auto branch_text : split(text, '&')) {
    std::vector<std::uint32_t> branch;
    for (auto node_text : split(branch_text, '>')) {
      node_text = trim(node_text);
      std::uint32_t value = 0;
      const auto* end = node_text.data() + node_text.size();
      auto [ptr, ec] = std::from_chars(node_text.data(), end, value);
      if (node_text.empty() || ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("plan: malformed node '" + std::string(node_text) + "'");
      }
      if (value == 0) throw std::invalid_argument("plan: level 0 is not allowed");
      branch.push_back(value);
    }
    plan.branches.push_back(std::move(branch));
  }
  return plan;
}

LadderPlan default_plan(int k, std::uint32_t p) {
  if (k < 2) throw std::invalid_argument("default_plan: k must be at least 2");
  if (k == 8) return LadderPlan{k, p, {{1, 3, 9}}};
  if (k == 9) return LadderPlan{k, p, {{1, 2, 10}, {1, 5, 10}}};
  std::vector<std::uint32_t> chain{1};
  std::uint32_t rest = static_cast<std::uint32_t>(k + 1);
  for (std::uint32_t q = 2; rest > 1; ++q) {
    while (rest % q == 0) {
      rest /= q;
      chain.push_back(chain.back() * q);
    }
  }
  return LadderPlan{k, p, {chain}};
}

PlanReport validate_plan(const LadderPlan& plan) {
  PlanReport report;
  auto violation = [&](std::string s) { report.violations.push_back(std::move(s)); };

  if (plan.k < 2) violation("k must be at least 2");
  if (plan.p < 2) violation("p must be at least 2");
  if (plan.branches.empty()) {
    violation("plan has no branches");
    return report;
  }
  for (const auto& b : plan.branches) {
    if (b.empty()) {
      violation("empty branch");
      continue;
    }
    if (b.front() != 1) violation("branch root " + std::to_string(b.front()) + " is not 1");
  }
  for (const auto& [from, to] : plan.edges()) {
    const std::string e = std::to_string(from) + ">" + std::to_string(to);
    if (to == from) {
      violation("edge " + e + " does not increase the level");
    } else if (to % from != 0) {
      violation("non-divisible edge " + e);
    }
  }

  // Cycle detection over the edge relation (only reachable with bad edges).
  const auto nodes = plan.nodes();
  const auto edges = plan.edges();
  std::map<std::uint32_t, int> colour;
  bool cyclic = false;
  auto visit = [&](auto&& self, std::uint32_t n) -> void {
    colour[n] = 1;
    for (const auto& [from, to] : edges) {
      if (from != n) continue;
      if (colour[to] == 1) cyclic = true;
      else if (colour[to] == 0) self(self, to);
    }
    colour[n] = 2;
  };
  for (auto n : nodes) {
    if (colour[n] == 0) visit(visit, n);
  }
  if (cyclic) violation("plan contains a cycle");

  std::vector<std::uint32_t> sinks;
  for (auto n : nodes) {
    const bool has_out = std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return e.first == n; });
    if (!has_out) sinks.push_back(n);
  }
  if (sinks.size() > 1) {
    std::string s = "plan has several terminal nodes:";
    for (auto n : sinks) s += " " + std::to_string(n);
    violation(s);
  }

  if (plan.k >= 2 && report.ok()) {
    const std::uint32_t k1 = static_cast<std::uint32_t>(plan.k + 1);
    const std::uint32_t t = plan.terminal();
    if (t % k1 != 0) {
      report.warnings.push_back("terminal level " + std::to_string(t) + " is not a multiple of k+1 = " +
                                std::to_string(k1) + "; the improper set cannot be empty for p > k+1");
    } else if (t != k1) {
      report.warnings.push_back("terminal level " + std::to_string(t) +
                                " is not k+1; the run is not certificate grade");
    }
    if (is_prime(k1) && nodes.size() == 2 && nodes[0] == 1 && nodes[1] == k1) {
      report.warnings.push_back("k+1 = " + std::to_string(k1) +
                                " is prime: no intermediate sieve; consider an auxiliary filter such as 1>2>" +
                                std::to_string(2 * k1) + " (each level-1 member lifts to (k+1)^k candidates)");
    }
  }
  return report;
}

bool is_certificate_grade(const LadderPlan& plan) {
  return validate_plan(plan).ok() && plan.terminal() == static_cast<std::uint32_t>(plan.k + 1);
}

CostEstimate estimate_cost(const LadderPlan& plan, std::span<const Rational> survival) {
  const auto report = validate_plan(plan);
  if (!report.ok()) throw std::invalid_argument("estimate_cost: invalid plan: " + report.violations.front());
  const auto nodes = plan.nodes();
  if (survival.size() != nodes.size() - 1) {
    throw std::invalid_argument("estimate_cost: expected " + std::to_string(nodes.size() - 1) +
                                " survival ratios, got " + std::to_string(survival.size()));
  }
  for (const auto& s : survival) {
    if (s < 0 || s > 1) throw std::invalid_argument("estimate_cost: survival ratio outside [0,1]");
  }

  CostEstimate est;
  std::map<std::uint32_t, Rational> coef;
  std::map<std::uint32_t, Rational> surv;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) surv[nodes[i]] = survival[i];

  Rational total = 0;
  const unsigned k = static_cast<unsigned>(plan.k);
  for (auto n : nodes) {  // ascending order is topological
    const auto parents = plan.parents(n);
    Rational c = 1;
    if (!parents.empty()) {
      c = coef[parents.front()] * surv[parents.front()];
      for (std::size_t i = 1; i < parents.size(); ++i) {
        c = std::min(c, Rational(coef[parents[i]] * surv[parents[i]]));
      }
      if (parents.size() > 1) est.heuristic = true;
    }
    coef[n] = c;
    total += c * Rational(boost::multiprecision::pow(BigInt(n), k));
  }
  est.checks = total * Rational(boost::multiprecision::pow(BigInt(plan.p - 1), k));
  return est;
}

}  // namespace lrc
