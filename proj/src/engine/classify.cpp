#include "internal.hpp"

namespace lrc {

ProperStatus classify_proper(const SpeedSet& set, const Level& level, const WitnessTable& table) {
  if (!(table.level() == level)) throw std::invalid_argument("classify_proper: table level mismatch");
  check_set(set, level, Representation::literal);
  const auto values = set.to_vector();
  if (auto g = gcd_witness(values, level, set.size() == static_cast<std::size_t>(level.k()))) return *g;

  const std::size_t nw = table.words_per_row();
  std::vector<std::uint64_t> acc(table.row(values[0]).begin(), table.row(values[0]).end());
  for (std::size_t i = 1; i < values.size(); ++i) {
    const auto row = table.row(values[i]);
    for (std::size_t w = 0; w < nw; ++w) acc[w] &= row[w];
  }
  for (std::size_t w = 0; w < nw; ++w) {
    if (acc[w] != 0) return TimeWitness{static_cast<Residue>(w * 64 + std::countr_zero(acc[w]))};
  }
  return Improper{};
}

bool verify_status(const SpeedSet& set, const Level& level, const ProperStatus& status) {
  const std::uint64_t n = level.modulus();
  const int k = level.k();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!level.in_universe(set[i])) return false;
  }
  if (set.empty() || set.size() > static_cast<std::size_t>(k)) return false;

  auto time_ok = [&](std::uint64_t t) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!is_admissible(t * set[i] % n, n, k)) return false;
    }
    return true;
  };
  auto divides_all_except = [&](std::uint64_t d, std::optional<Residue> skip) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (skip && set[i] == *skip) continue;
      if (set[i] % d != 0) return false;
    }
    return true;
  };

  if (const auto* tw = std::get_if<TimeWitness>(&status)) return tw->t < n && time_ok(tw->t);
  if (const auto* gw = std::get_if<GcdWitness>(&status)) {
    if (gw->divisor < 2 || n % gw->divisor != 0) return false;
    if (gw->removed) {
      const auto values = set.to_vector();
      const bool present = std::find(values.begin(), values.end(), *gw->removed) != values.end();
      // Dropping one entry is only sound when every entry is distinct.
      if (!present || set.size() != static_cast<std::size_t>(k)) return false;
    }
    return divides_all_except(gw->divisor, gw->removed);
  }

  // Improper: no gcd witness and no admissible time.
  for (std::uint64_t t = 0; t < n; ++t) {
    if (time_ok(t)) return false;
  }
  const bool full = set.size() == static_cast<std::size_t>(k);
  for (std::uint64_t d = 2; d <= n; ++d) {
    if (n % d != 0) continue;
    if (divides_all_except(d, std::nullopt)) return false;
    if (full) {
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (divides_all_except(d, set[i])) return false;
      }
    }
  }
  return true;
}

namespace detail {

ImproperCollection assemble(const Level& level, Representation representation, std::vector<ChunkOutput>& chunks,
                            std::chrono::steady_clock::time_point start) {
  ImproperCollection c{level, representation, {}, {}};
  std::size_t total = 0;
  for (const auto& ch : chunks) total += ch.sets.size();
  c.sets.reserve(total);
  for (auto& ch : chunks) {
    c.stats.examined = checked_add(c.stats.examined, ch.examined);
    c.stats.visited += ch.visited;
    c.sets.insert(c.sets.end(), ch.sets.begin(), ch.sets.end());
    std::vector<SpeedSet>().swap(ch.sets);
  }
  std::sort(c.sets.begin(), c.sets.end());
  c.sets.erase(std::unique(c.sets.begin(), c.sets.end()), c.sets.end());
  c.stats.improper = c.sets.size();
  c.stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return c;
}

void classify_into(const SpeedSet& candidate, const WitnessTable& table, ChunkOutput& out, SetBudget& budget) {
  const Level& level = table.level();
  Residue values[kMaxSpeeds];
  for (std::size_t i = 0; i < candidate.size(); ++i) values[i] = candidate[i];
  ++out.examined;
  ++out.visited;
  if (has_gcd_witness(values, candidate.size(), level.modulus(), level.k())) return;
  const std::size_t nw = table.words_per_row();
  std::uint64_t acc[kMaxEngineModulus / 64];
  const auto first = table.row(values[0]);
  std::copy(first.begin(), first.end(), acc);
  for (std::size_t i = 1; i < candidate.size(); ++i) {
    const auto row = table.row(values[i]);
    for (std::size_t w = 0; w < nw; ++w) acc[w] &= row[w];
  }
  if (any_bits<0>(acc, nw)) return;
  budget.charge(1);
  out.sets.push_back(candidate);
}

}  // namespace detail

ImproperCollection compute_improper_within(const Level& target, std::span<const SpeedSet> candidates,
                                           const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_engine_level(target);
  std::vector<SpeedSet> unique(candidates.begin(), candidates.end());
  for (const auto& s : unique) check_set(s, target, options.representation);
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  const WitnessTable table = build_witness_table(target);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunk_count = (unique.size() + kChunk - 1) / kChunk;
  std::vector<detail::ChunkOutput> chunks(chunk_count);
  detail::SetBudget budget(options.max_sets);
  detail::run_chunks(chunk_count, options.workers, [&](std::size_t c) {
    const std::size_t end = std::min(unique.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) detail::classify_into(unique[i], table, chunks[c], budget);
  });
  return detail::assemble(target, options.representation, chunks, start);
}

}  // namespace lrc
