#pragma once

// Ladder plans: divisor chains of levels 1 = l_1 | l_2 | ... | l_n, possibly
// several branches merged (by intersection of shadows) at a common node.
//
// Text grammar: branches separated by '&', nodes within a branch by '>'.
// "1>3>9" is a chain; "1>2>10 & 1>5>10" merges two branches at 10.
// Nodes are identified by their ell value, so equal values in different
// branches denote the same node.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrc/modmath.hpp"

namespace lrc {

struct LadderPlan {
  int k = 0;
  std::uint32_t p = 0;
  std::vector<std::vector<std::uint32_t>> branches;

  /// Distinct ell values in increasing order.
  std::vector<std::uint32_t> nodes() const;
  /// Distinct (source, target) edges in order of first appearance.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;
  /// Distinct parents of a node, ascending.
  std::vector<std::uint32_t> parents(std::uint32_t ell) const;
  bool is_merge(std::uint32_t ell) const { return parents(ell).size() > 1; }
  /// The largest node; for a valid plan the unique sink.
  std::uint32_t terminal() const;

  std::string to_string() const;

  friend bool operator==(const LadderPlan&, const LadderPlan&) = default;
};

/// Throws std::invalid_argument on malformed text. Structural problems
/// (non-divisible edges and the like) are left for validate_plan.
LadderPlan parse_plan(std::string_view text, int k, std::uint32_t p);

/// k = 8: 1>3>9. k = 9: 1>2>10 & 1>5>10. Otherwise a longest divisor chain
/// of k+1 built by multiplying in its prime factors smallest first
/// (12 -> 1>2>4>12, prime k+1 -> 1>(k+1)).
LadderPlan default_plan(int k, std::uint32_t p);

struct PlanReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

PlanReport validate_plan(const LadderPlan& plan);

/// A valid plan whose terminal is k+1.
bool is_certificate_grade(const LadderPlan& plan);

struct CostEstimate {
  Rational checks;
  /// Set when a merge node forced the min-of-branches approximation.
  bool heuristic = false;
};

/// (p-1)^k * sum over nodes of coef(node) * ell^k, with coef(root) = 1 and
/// coef(child) = coef(parent) * s(parent). `survival` holds one entry per
/// non-terminal node in increasing ell order. Merge nodes take the minimum
/// over their parents.
CostEstimate estimate_cost(const LadderPlan& plan, std::span<const Rational> survival);

}  // namespace lrc
