#include <map>

#include "internal.hpp"

namespace lrc {

LadderRun run_ladder(const LadderPlan& plan, const EngineOptions& options) {
  const PlanReport report = validate_plan(plan);
  if (!report.ok()) {
    std::string msg = "invalid plan " + plan.to_string() + ":";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }

  const auto nodes = plan.nodes();
  // Remaining children per node; a collection is dropped once all have run.
  std::map<std::uint32_t, std::size_t> pending;
  for (const auto& [from, to] : plan.edges()) ++pending[from];

  std::map<std::uint32_t, ImproperCollection> live;
  std::optional<ImproperCollection> final_collection;
  std::vector<NodeRecord> records;
  for (const std::uint32_t ell : nodes) {
    const Level level(plan.k, ell, plan.p);
    const auto parents = plan.parents(ell);
    ImproperCollection c = [&] {
      if (parents.empty()) return compute_improper_base(level, options);
      if (parents.size() == 1) return lift_improper(live.at(parents[0]), level, options);
      std::vector<const ImproperCollection*> ptrs;
      for (auto q : parents) ptrs.push_back(&live.at(q));
      return merge_improper(ptrs, level, options);
    }();
    records.push_back({ell, c.stats});
    for (auto q : parents) {
      if (--pending[q] == 0) live.erase(q);
    }
    if (ell == plan.terminal()) {
      final_collection = std::move(c);
    } else {
      live.emplace(ell, std::move(c));
    }
  }
  return LadderRun{std::move(*final_collection), std::move(records), is_certificate_grade(plan)};
}

}  // namespace lrc
