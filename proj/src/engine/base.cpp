// Base-level enumeration of improper sets.
//
// A set is time-improper iff the AND of its witness rows is zero, i.e. every
// time t is "killed" by some member. The search keeps the running AND and
// branches on the surviving time with the fewest remaining killers: any
// improper extension must contain one of them. Trying killers in order and
// excluding each one from later siblings partitions the extensions, so
// every improper set is produced exactly once. Once the AND is zero only the
// gcd rule can still rescue an extension, and the search switches to plain
// completion. Top-level chunks are indexed by the smallest member.

#include "internal.hpp"

namespace lrc {
namespace {

using detail::Word;

struct BaseContext {
  Level level;
  Representation representation;
  std::vector<Residue> universe;
  std::size_t nw = 0;          // words per time row
  std::size_t uw = 0;          // words per universe bitset
  std::uint32_t half = 0;      // times 1..half represent all times by symmetry
  std::uint32_t max_kill = 0;  // most half-times any one value kills
  std::vector<Word> good;      // row per universe index
  std::vector<Word> killers;   // row per time t in [0, half], bits over universe indices
  std::vector<Word> half_mask;

  const Word* good_row(std::size_t i) const { return good.data() + i * nw; }
  const Word* killer_row(std::size_t t) const { return killers.data() + t * uw; }
};

BaseContext make_context(const Level& level, Representation representation) {
  BaseContext ctx{level, representation, universe_members(level, representation)};
  const WitnessTable table = build_witness_table(level);
  const std::uint32_t n = level.modulus();
  const std::size_t count = ctx.universe.size();
  ctx.nw = table.words_per_row();
  ctx.uw = (count + 63) / 64;
  ctx.half = n / 2;
  ctx.good.resize(count * ctx.nw);
  ctx.killers.assign((ctx.half + 1) * ctx.uw, 0);
  ctx.half_mask.assign(ctx.nw, 0);
  for (std::uint32_t t = 1; t <= ctx.half; ++t) ctx.half_mask[t >> 6] |= Word{1} << (t & 63);
  for (std::size_t i = 0; i < count; ++i) {
    const auto row = table.row(ctx.universe[i]);
    std::copy(row.begin(), row.end(), ctx.good.begin() + static_cast<std::ptrdiff_t>(i * ctx.nw));
    std::uint32_t kills = 0;
    for (std::uint32_t t = 1; t <= ctx.half; ++t) {
      if (!table.test(ctx.universe[i], t)) {
        ctx.killers[t * ctx.uw + (i >> 6)] |= Word{1} << (i & 63);
        ++kills;
      }
    }
    ctx.max_kill = std::max(ctx.max_kill, kills);
  }
  return ctx;
}

template <std::size_t W>
class BaseSearch {
 public:
  BaseSearch(const BaseContext& ctx, detail::ChunkOutput& out, detail::SetBudget& budget)
      : ctx_(ctx),
        out_(out),
        budget_(budget),
        k_(ctx.level.k()),
        acc_((k_ + 2) * ctx.nw),
        allowed_((k_ + 2) * ctx.uw),
        scratch_((k_ + 2) * ctx.uw) {}

  void run(std::size_t lead) {
    const std::size_t count = ctx_.universe.size();
    chosen_[0] = static_cast<std::uint32_t>(lead);
    std::copy_n(ctx_.good_row(lead), ctx_.nw, acc_at(1));
    Word* allowed = allowed_at(1);
    std::fill_n(allowed, ctx_.uw, 0);
    for (std::size_t j = lead + 1; j < count; ++j) allowed[j >> 6] |= Word{1} << (j & 63);
    explore(1);
  }

 private:
  Word* acc_at(int d) { return acc_.data() + static_cast<std::size_t>(d) * ctx_.nw; }
  Word* allowed_at(int d) { return allowed_.data() + static_cast<std::size_t>(d) * ctx_.uw; }
  Word* scratch_at(int d) { return scratch_.data() + static_cast<std::size_t>(d) * ctx_.uw; }

  std::size_t popcount_and(const Word* a, const Word* b, std::size_t n) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return c;
  }

  template <class Fn>
  static void for_each_bit(const Word* words, std::size_t n, Fn&& fn) {
    for (std::size_t wi = 0; wi < n; ++wi) {
      for (Word w = words[wi]; w != 0; w &= w - 1) {
        if (!fn(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)))) return;
      }
    }
  }

  void emit(int size) {
    Residue values[kMaxSpeeds];
    for (int i = 0; i < size; ++i) values[i] = ctx_.universe[chosen_[i]];
    std::sort(values, values + size);
    ++out_.visited;
    if (detail::has_gcd_witness(values, static_cast<std::size_t>(size), ctx_.level.modulus(), k_)) return;
    budget_.charge(1);
    out_.sets.emplace_back(std::span<const Residue>(values, static_cast<std::size_t>(size)));
  }

  // Every extension of the chosen set is time-improper.
  void complete(int d) {
    emit(d);
    pool_.clear();
    for_each_bit(allowed_at(d), ctx_.uw, [&](std::size_t j) {
      pool_.push_back(static_cast<std::uint32_t>(j));
      return true;
    });
    extend(0, d);
  }

  void extend(std::size_t from, int d) {
    if (d >= k_) return;
    for (std::size_t q = from; q < pool_.size(); ++q) {
      chosen_[d] = pool_[q];
      emit(d + 1);
      extend(q + 1, d + 1);
    }
  }

  void explore(int d) {
    ++out_.visited;
    const std::size_t nw = detail::width<W>(ctx_.nw);
    const std::size_t uw = ctx_.uw;
    Word* acc = acc_at(d);
    if (!detail::any_bits<W>(acc, nw)) {
      complete(d);
      return;
    }
    const int remaining = k_ - d;
    if (remaining == 0) return;

    Word surviving[kMaxEngineModulus / 64];
    std::size_t alive = 0;
    for (std::size_t i = 0; i < nw; ++i) {
      surviving[i] = acc[i] & ctx_.half_mask[i];
      alive += static_cast<std::size_t>(std::popcount(surviving[i]));
    }
    if (alive > static_cast<std::size_t>(remaining) * ctx_.max_kill) return;

    const Word* allowed = allowed_at(d);
    Word* candidates = scratch_at(d);

    if (remaining == 1) {
      // The last value has to kill every surviving time on its own.
      std::copy_n(allowed, uw, candidates);
      bool any = true;
      for_each_bit(surviving, nw, [&](std::size_t t) {
        const Word* kr = ctx_.killer_row(t);
        Word nonzero = 0;
        for (std::size_t i = 0; i < uw; ++i) nonzero |= (candidates[i] &= kr[i]);
        any = nonzero != 0;
        return any;
      });
      if (!any) return;
      for_each_bit(candidates, uw, [&](std::size_t j) {
        chosen_[d] = static_cast<std::uint32_t>(j);
        emit(d + 1);
        return true;
      });
      return;
    }

    std::size_t best_t = 0;
    std::size_t best_count = SIZE_MAX;
    for_each_bit(surviving, nw, [&](std::size_t t) {
      const std::size_t c = popcount_and(ctx_.killer_row(t), allowed, uw);
      if (c < best_count) {
        best_count = c;
        best_t = t;
      }
      return c != 0;
    });
    if (best_count == 0) return;

    const Word* kr = ctx_.killer_row(best_t);
    for (std::size_t i = 0; i < uw; ++i) candidates[i] = kr[i] & allowed[i];
    Word* child_allowed = allowed_at(d + 1);
    std::copy_n(allowed, uw, child_allowed);
    for_each_bit(candidates, uw, [&](std::size_t j) {
      child_allowed[j >> 6] &= ~(Word{1} << (j & 63));
      chosen_[d] = static_cast<std::uint32_t>(j);
      detail::and_into<W>(acc_at(d + 1), acc, ctx_.good_row(j), nw);
      explore(d + 1);
      return true;
    });
  }

  const BaseContext& ctx_;
  detail::ChunkOutput& out_;
  detail::SetBudget& budget_;
  int k_;
  std::vector<Word> acc_;
  std::vector<Word> allowed_;
  std::vector<Word> scratch_;
  std::vector<std::uint32_t> pool_;
  std::uint32_t chosen_[kMaxSpeeds]{};
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  BigInt b = 1;
  for (std::uint64_t i = 0; i < r; ++i) b = b * (n - i) / (i + 1);
  if (b > std::numeric_limits<std::uint64_t>::max()) throw ResourceLimit("candidate count exceeds 64 bits");
  return static_cast<std::uint64_t>(b);
}

}  // namespace

ImproperCollection compute_improper_base(const Level& level, const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_engine_level(level);
  const BaseContext ctx = make_context(level, options.representation);
  const std::size_t count = ctx.universe.size();

  std::vector<detail::ChunkOutput> chunks(count);
  detail::SetBudget budget(options.max_sets);
  detail::with_width(ctx.nw, [&]<std::size_t W>() {
    detail::run_chunks(count, options.workers, [&](std::size_t lead) {
      BaseSearch<W> search(ctx, chunks[lead], budget);
      search.run(lead);
    });
  });

  auto collection = detail::assemble(level, options.representation, chunks, start);
  std::uint64_t examined = 0;
  for (int s = 1; s <= level.k(); ++s) examined = detail::checked_add(examined, binomial(count, static_cast<std::uint64_t>(s)));
  collection.stats.examined = examined;
  return collection;
}

}  // namespace lrc
