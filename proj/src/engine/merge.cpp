// Intersection of shadows without materializing either shadow.
//
// With parents at levels la and lb, g = gcd(la, lb) and L = lcm(la, lb), a
// set T at level L lies in both shadows iff its reductions A (mod la*p) and
// B (mod lb*p) are parent members. Then A and B reduce to the same set mod
// g*p, and every element of T is the CRT combination of one element of A
// with a compatible element of B. So T corresponds to a set of compatible
// (x, y) pairs covering all of A and all of B, and each T arises from exactly
// one (A, B) pair. Members are grouped by their reduction mod g*p and only
// matching groups are combined.

#include <memory>

#include "internal.hpp"

namespace lrc {
namespace {

struct Side {
  std::uint32_t modulus;
  std::span<const SpeedSet> sets;
};

struct Group {
  std::size_t a_begin, a_end, b_begin, b_end;
};

class JoinEnumerator {
 public:
  JoinEnumerator(std::uint32_t na, std::uint32_t nb, std::uint32_t ng, std::uint32_t nl, Representation r, int k)
      : na_(na), nb_(nb), ng_(ng), nl_(nl), representation_(r), k_(k) {}

  template <class Visit>
  void run(const SpeedSet& a, const SpeedSet& b, Visit&& visit) {
    groups_.assign(a.size(), {});
    edge_y_.assign(a.size(), {});
    for (std::size_t xi = 0; xi < a.size(); ++xi) {
      for (std::size_t yi = 0; yi < b.size(); ++yi) add_edges(a[xi], b[yi], xi, yi);
      if (groups_[xi].empty()) return;  // x cannot be covered
    }
    b_size_ = b.size();
    chosen_.clear();
    rec(0, 0, visit);
  }

 private:
  void add_edges(Residue x, Residue y, std::size_t xi, std::size_t yi) {
    const int signs = representation_ == Representation::sign_reduced ? 2 : 1;
    for (int s = 0; s < signs; ++s) {
      const Residue ys = s == 0 ? y : nb_ - y;
      if (x % ng_ != ys % ng_) continue;
      Residue u = 0;
      for (Residue cand = x; cand < nl_; cand += na_) {
        if (cand % nb_ == ys) {
          u = cand;
          break;
        }
      }
      u = canonical_residue(u, nl_, representation_);
      auto& g = groups_[xi];
      if (std::find(g.begin(), g.end(), u) == g.end()) {
        g.push_back(u);
        edge_y_[xi].push_back(static_cast<std::uint32_t>(yi));
      }
    }
  }

  template <class Visit>
  void rec(std::size_t xi, std::uint32_t covered, Visit& visit) {
    if (xi == groups_.size()) {
      if (covered == (std::uint32_t{1} << b_size_) - 1) {
        Residue values[kMaxSpeeds];
        std::copy(chosen_.begin(), chosen_.end(), values);
        std::sort(values, values + chosen_.size());
        visit(SpeedSet(std::span<const Residue>(values, chosen_.size())));
      }
      return;
    }
    const int later = static_cast<int>(groups_.size() - xi - 1);
    const int budget = k_ - static_cast<int>(chosen_.size()) - later;
    if (budget < 1) return;
    pick(xi, 0, 0, budget, covered, visit);
  }

  // Choose a nonempty subset of the edges at x (at most `budget` of them).
  template <class Visit>
  void pick(std::size_t xi, std::size_t from, int taken, int budget, std::uint32_t covered, Visit& visit) {
    const auto& g = groups_[xi];
    for (std::size_t e = from; e < g.size(); ++e) {
      chosen_.push_back(g[e]);
      const std::uint32_t cov = covered | (std::uint32_t{1} << edge_y_[xi][e]);
      rec(xi + 1, cov, visit);
      if (taken + 1 < budget) pick(xi, e + 1, taken + 1, budget, cov, visit);
      chosen_.pop_back();
    }
  }

  std::uint32_t na_, nb_, ng_, nl_;
  Representation representation_;
  int k_;
  std::size_t b_size_ = 0;
  std::vector<std::vector<Residue>> groups_;         // candidate u per x
  std::vector<std::vector<std::uint32_t>> edge_y_;   // matching y index per u
  std::vector<Residue> chosen_;
};

/// Pairs of member ranges whose reductions mod ng agree.
std::vector<Group> match_groups(const Side& a, const Side& b, std::uint32_t ng, Representation r,
                                std::vector<std::size_t>& a_order, std::vector<std::size_t>& b_order) {
  auto keyed = [&](const Side& side, std::vector<std::size_t>& order) {
    std::vector<SpeedSet> keys(side.sets.size());
    for (std::size_t i = 0; i < side.sets.size(); ++i) keys[i] = detail::project(side.sets[i], ng, r);
    order.resize(side.sets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
    return keys;
  };
  const auto ka = keyed(a, a_order);
  const auto kb = keyed(b, b_order);
  std::vector<Group> groups;
  std::size_t i = 0, j = 0;
  while (i < a_order.size() && j < b_order.size()) {
    const auto& x = ka[a_order[i]];
    const auto& y = kb[b_order[j]];
    if (x < y) {
      ++i;
    } else if (y < x) {
      ++j;
    } else {
      std::size_t i2 = i, j2 = j;
      while (i2 < a_order.size() && ka[a_order[i2]] == x) ++i2;
      while (j2 < b_order.size() && kb[b_order[j2]] == x) ++j2;
      groups.push_back({i, i2, j, j2});
      i = i2;
      j = j2;
    }
  }
  return groups;
}

class Join {
 public:
  Join(const Side& a, const Side& b, Representation r, int k, std::uint32_t p)
      : a_(a), b_(b), r_(r), k_(k), p_(p) {
    const std::uint32_t la = a.modulus / p, lb = b.modulus / p;
    g_ = std::gcd(la, lb);
    l_ = la / g_ * lb;
    groups_ = match_groups(a, b, g_ * p, r, a_order_, b_order_);
  }

  std::size_t group_count() const { return groups_.size(); }
  std::uint32_t level() const { return l_; }

  /// make_visitor(group) returns the callable receiving that group's sets.
  template <class MakeVisitor>
  void run(unsigned workers, MakeVisitor&& make_visitor) const {
    detail::run_chunks(groups_.size(), workers, [&](std::size_t gi) {
      auto visit = make_visitor(gi);
      JoinEnumerator en(a_.modulus, b_.modulus, g_ * p_, l_ * p_, r_, k_);
      const auto& grp = groups_[gi];
      for (std::size_t i = grp.a_begin; i < grp.a_end; ++i) {
        for (std::size_t j = grp.b_begin; j < grp.b_end; ++j) {
          en.run(a_.sets[a_order_[i]], b_.sets[b_order_[j]], visit);
        }
      }
    });
  }

 private:
  Side a_, b_;
  Representation r_;
  int k_;
  std::uint32_t p_, g_ = 1, l_ = 1;
  std::vector<std::size_t> a_order_, b_order_;
  std::vector<Group> groups_;
};

}  // namespace

CandidateSet intersect_candidates(const CandidateSet& a, const CandidateSet& b) {
  if (!(a.level == b.level)) {
    throw std::invalid_argument("intersect_candidates: level mismatch " + to_string(a.level) + " vs " +
                                to_string(b.level));
  }
  if (a.representation != b.representation) throw std::invalid_argument("intersect_candidates: representation mismatch");
  auto sa = a.sets, sb = b.sets;
  for (auto* v : {&sa, &sb}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  CandidateSet out{a.level, a.representation, {}};
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out.sets));
  return out;
}

ImproperCollection merge_improper(std::span<const ImproperCollection* const> parents, const Level& target,
                                  const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (parents.empty()) throw std::invalid_argument("merge_improper: no parents");
  for (const auto* parent : parents) {
    if (parent->level.k() != target.k() || parent->level.p() != target.p() ||
        target.ell() % parent->level.ell() != 0) {
      throw std::invalid_argument("merge_improper: parent " + to_string(parent->level) + " does not divide " +
                                  to_string(target));
    }
    if (parent->representation != options.representation) {
      throw std::invalid_argument("merge_improper: representation mismatch");
    }
  }
  if (parents.size() == 1) return lift_improper(*parents[0], target, options);
  detail::check_engine_level(target);

  const int k = target.k();
  const std::uint32_t p = target.p();
  const Representation r = options.representation;

  // Fold all but the last parent into a materialized candidate list.
  std::vector<SpeedSet> materialized;
  Side left{parents[0]->level.modulus(), parents[0]->sets};
  for (std::size_t i = 1; i + 1 < parents.size(); ++i) {
    const Join j(left, Side{parents[i]->level.modulus(), parents[i]->sets}, r, k, p);
    std::vector<std::vector<SpeedSet>> per_group(j.group_count());
    j.run(options.workers, [&](std::size_t gi) {
      return [&per_group, gi](const SpeedSet& t) { per_group[gi].push_back(t); };
    });
    std::vector<SpeedSet> next;
    for (auto& part : per_group) next.insert(next.end(), part.begin(), part.end());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    materialized = std::move(next);
    left = Side{j.level() * p, materialized};
  }

  const Join last(left, Side{parents.back()->level.modulus(), parents.back()->sets}, r, k, p);
  const std::uint32_t l = last.level();
  const WitnessTable table = build_witness_table(target);
  std::vector<detail::ChunkOutput> chunks(last.group_count());
  detail::SetBudget budget(options.max_sets);
  const bool at_target = l == target.ell();
  last.run(options.workers, [&](std::size_t gi) {
    return [&, gi, lifter = at_target ? nullptr : std::make_shared<detail::Lifter>(table, r, chunks[gi], budget)](
               const SpeedSet& t) {
      if (lifter) {
        lifter->lift(t, l * p);
      } else {
        detail::classify_into(t, table, chunks[gi], budget);
      }
    };
  });
  return detail::assemble(target, r, chunks, start);
}

}  // namespace lrc
