#include "internal.hpp"

namespace lrc {
namespace detail {

std::vector<Residue> lifts_of(Residue v, std::uint32_t from_n, std::uint32_t c, Representation r) {
  const std::uint32_t to_n = from_n * c;
  std::vector<Residue> out;
  out.reserve(c);
  for (std::uint32_t a = 0; a < c; ++a) out.push_back(canonical_residue(v + a * from_n, to_n, r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpeedSet project(const SpeedSet& set, std::uint32_t to_n, Representation r) {
  Residue values[kMaxSpeeds];
  for (std::size_t i = 0; i < set.size(); ++i) values[i] = canonical_residue(set[i] % to_n, to_n, r);
  std::sort(values, values + set.size());
  const auto end = std::unique(values, values + set.size());
  return SpeedSet(std::span<const Residue>(values, static_cast<std::size_t>(end - values)));
}

Lifter::Lifter(const WitnessTable& table, Representation representation, ChunkOutput& out, SetBudget& budget)
    : table_(table),
      representation_(representation),
      out_(out),
      budget_(budget),
      k_(table.level().k()),
      nw_(table.words_per_row()),
      acc_((kMaxSpeeds + 2) * table.words_per_row()) {}

void Lifter::lift(const SpeedSet& source, std::uint32_t source_n) {
  const std::uint32_t target_n = table_.level().modulus();
  const std::uint32_t c = target_n / source_n;
  positions_ = source.size();
  lifts_.resize(positions_);
  mask_offset_.resize(positions_ + 1);
  std::size_t total = 0;
  for (std::size_t j = 0; j < positions_; ++j) {
    lifts_[j] = lifts_of(source[j], source_n, c, representation_);
    mask_offset_[j] = total;
    total += (std::size_t{1} << lifts_[j].size()) * nw_;
  }
  mask_offset_[positions_] = total;
  mask_and_.assign(total, ~Word{0});
  suffix_.assign((positions_ + 1) * nw_, ~Word{0});

  for (std::size_t j = 0; j < positions_; ++j) {
    Word* base = mask_and_.data() + mask_offset_[j];
    const std::size_t masks = std::size_t{1} << lifts_[j].size();
    for (std::size_t mask = 1; mask < masks; ++mask) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
      const Word* prev = base + (mask & (mask - 1)) * nw_;
      const auto row = table_.row(lifts_[j][low]);
      Word* dst = base + mask * nw_;
      for (std::size_t w = 0; w < nw_; ++w) dst[w] = prev[w] & row[w];
    }
  }
  for (std::size_t j = positions_; j-- > 0;) {
    const Word* all = mask_and_.data() + mask_offset_[j] + ((std::size_t{1} << lifts_[j].size()) - 1) * nw_;
    for (std::size_t w = 0; w < nw_; ++w) suffix_[j * nw_ + w] = suffix_[(j + 1) * nw_ + w] & all[w];
  }

  out_.examined = checked_add(out_.examined, shadow_size(source, Level(k_, source_n / table_.level().p(), table_.level().p()),
                                                          table_.level(), representation_));
  std::fill_n(acc_.begin(), nw_, ~Word{0});
  with_width(nw_, [&]<std::size_t W>() { search<W>(0, 0); });
}

template <std::size_t W>
void Lifter::search(std::size_t j, int used) {
  ++out_.visited;
  const std::size_t nw = width<W>(nw_);
  const Word* acc = acc_.data() + j * nw_;
  // A time that survives every remaining lift can never be killed.
  if (any_and<W>(acc, suffix_.data() + j * nw_, nw)) return;
  if (j == positions_) {
    emit(used);
    return;
  }
  const auto& lifts = lifts_[j];
  const int later = static_cast<int>(positions_ - j - 1);
  const std::size_t masks = std::size_t{1} << lifts.size();
  const Word* base = mask_and_.data() + mask_offset_[j];
  Word* next = acc_.data() + (j + 1) * nw_;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    const int pc = std::popcount(mask);
    if (used + pc + later > k_) continue;
    and_into<W>(next, acc, base + mask * nw_, nw);
    int n = used;
    for (std::size_t b = 0; b < lifts.size(); ++b) {
      if (mask >> b & 1u) chosen_[n++] = lifts[b];
    }
    search<W>(j + 1, n);
  }
}

void Lifter::emit(int used) {
  Residue values[kMaxSpeeds];
  std::copy_n(chosen_, used, values);
  std::sort(values, values + used);
  const Level& level = table_.level();
  if (has_gcd_witness(values, static_cast<std::size_t>(used), level.modulus(), level.k())) return;
  budget_.charge(1);
  out_.sets.emplace_back(std::span<const Residue>(values, static_cast<std::size_t>(used)));
}

}  // namespace detail

namespace {

void check_shadow_target(const Level& from, const Level& target) {
  if (from.k() != target.k() || from.p() != target.p()) {
    throw std::invalid_argument("shadow: target " + to_string(target) + " does not match " + to_string(from));
  }
  if (target.ell() % from.ell() != 0) {
    throw std::invalid_argument("shadow: level " + std::to_string(target.ell()) + " is not a multiple of " +
                                std::to_string(from.ell()));
  }
}

}  // namespace

std::uint64_t shadow_size(const SpeedSet& source, const Level& from, const Level& target,
                          Representation representation) {
  check_shadow_target(from, target);
  const std::uint32_t c = target.ell() / from.ell();
  const auto k = static_cast<std::size_t>(target.k());
  // ways[i]: number of lift choices of total size i over the positions so far.
  std::vector<std::uint64_t> ways(k + 1, 0);
  ways[0] = 1;
  for (std::size_t j = 0; j < source.size(); ++j) {
    const std::size_t n = detail::lifts_of(source[j], from.modulus(), c, representation).size();
    std::vector<std::uint64_t> choose(n + 1, 1);
    for (std::size_t s = 1; s <= n; ++s) choose[s] = choose[s - 1] * (n - s + 1) / s;
    std::vector<std::uint64_t> next(k + 1, 0);
    for (std::size_t i = 0; i <= k; ++i) {
      if (ways[i] == 0) continue;
      for (std::size_t s = 1; s <= n && i + s <= k; ++s) {
        next[i + s] = detail::checked_add(next[i + s], detail::checked_mul(ways[i], choose[s]));
      }
    }
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = detail::checked_add(total, w);
  return total;
}

void for_each_shadow(const ImproperCollection& collection, const Level& target,
                     const std::function<void(const SpeedSet&)>& visit) {
  check_shadow_target(collection.level, target);
  const std::uint32_t c = target.ell() / collection.level.ell();
  const std::size_t k = static_cast<std::size_t>(target.k());
  for (const auto& source : collection.sets) {
    std::vector<std::vector<Residue>> lifts;
    for (std::size_t j = 0; j < source.size(); ++j) {
      lifts.push_back(detail::lifts_of(source[j], collection.level.modulus(), c, collection.representation));
    }
    std::vector<Residue> chosen;
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j == lifts.size()) {
        visit(SpeedSet::from_unsorted(chosen));
        return;
      }
      const std::size_t later = lifts.size() - j - 1;
      for (std::size_t mask = 1; mask < (std::size_t{1} << lifts[j].size()); ++mask) {
        const auto pc = static_cast<std::size_t>(std::popcount(mask));
        if (chosen.size() + pc + later > k) continue;
        for (std::size_t b = 0; b < lifts[j].size(); ++b) {
          if (mask >> b & 1u) chosen.push_back(lifts[j][b]);
        }
        self(self, j + 1);
        chosen.resize(chosen.size() - pc);
      }
    };
    rec(rec, 0);
  }
}

std::vector<SpeedSet> shadow(const ImproperCollection& collection, const Level& target) {
  std::vector<SpeedSet> out;
  for_each_shadow(collection, target, [&](const SpeedSet& s) { out.push_back(s); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ImproperCollection lift_improper(const ImproperCollection& source, const Level& target, const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_shadow_target(source.level, target);
  detail::check_engine_level(target);
  if (source.representation != options.representation) {
    throw std::invalid_argument("lift_improper: representation mismatch");
  }
  const WitnessTable table = build_witness_table(target);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunk_count = (source.sets.size() + kChunk - 1) / kChunk;
  std::vector<detail::ChunkOutput> chunks(chunk_count);
  detail::SetBudget budget(options.max_sets);
  detail::run_chunks(chunk_count, options.workers, [&](std::size_t c) {
    detail::Lifter lifter(table, options.representation, chunks[c], budget);
    const std::size_t end = std::min(source.sets.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) lifter.lift(source.sets[i], source.level.modulus());
  });
  return detail::assemble(target, options.representation, chunks, start);
}

}  // namespace lrc
