#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include "lrc/engine.hpp"

namespace lrc::detail {

using Word = std::uint64_t;

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(chunk) for every chunk index. Chunks are pulled from a shared
/// counter; callers store per-chunk output by index so the merged result
/// does not depend on scheduling.
template <class Fn>
void run_chunks(std::size_t chunk_count, unsigned workers, Fn&& fn) {
  workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(chunk_count, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunk_count; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        const std::size_t c = next.fetch_add(1);
        if (c >= chunk_count) return;
        try {
          fn(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Calls f.template operator()<W>() with W = words for 1..8 and W = 0
/// (runtime width) otherwise.
template <class F>
decltype(auto) with_width(std::size_t words, F&& f) {
  switch (words) {
    case 1: return f.template operator()<1>();
    case 2: return f.template operator()<2>();
    case 3: return f.template operator()<3>();
    case 4: return f.template operator()<4>();
    case 5: return f.template operator()<5>();
    case 6: return f.template operator()<6>();
    case 7: return f.template operator()<7>();
    case 8: return f.template operator()<8>();
    default: return f.template operator()<0>();
  }
}

template <std::size_t W>
constexpr std::size_t width(std::size_t runtime) {
  if constexpr (W != 0) {
    return W;
  } else {
    return runtime;
  }
}

template <std::size_t W>
inline bool any_and(const Word* a, const Word* b, std::size_t runtime) {
  const std::size_t n = width<W>(runtime);
  Word acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc |= a[i] & b[i];
  return acc != 0;
}

template <std::size_t W>
inline bool and_into(Word* out, const Word* a, const Word* b, std::size_t runtime) {
  const std::size_t n = width<W>(runtime);
  Word acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[i] & b[i];
    acc |= out[i];
  }
  return acc != 0;
}

template <std::size_t W>
inline bool any_bits(const Word* a, std::size_t runtime) {
  const std::size_t n = width<W>(runtime);
  Word acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc |= a[i];
  return acc != 0;
}

/// Gcd rule of modmath::gcd_witness on sorted, valid values (no checks).
inline bool has_gcd_witness(const Residue* values, std::size_t m, std::uint32_t n, int k) {
  if (static_cast<int>(m) < k) {
    std::uint32_t g = n;
    for (std::size_t i = 0; i < m && g > 1; ++i) g = std::gcd(g, values[i]);
    return g > 1;
  }
  std::uint32_t prefix[kMaxSpeeds + 1];
  std::uint32_t suffix[kMaxSpeeds + 1];
  prefix[0] = n;
  suffix[m] = n;
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = std::gcd(prefix[i], values[i]);
  for (std::size_t i = m; i-- > 0;) suffix[i] = std::gcd(suffix[i + 1], values[i]);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::gcd(prefix[i], suffix[i + 1]) > 1) return true;
  }
  return false;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceLimit("candidate count exceeds 64 bits");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceLimit("candidate count exceeds 64 bits");
  return r;
}

inline void check_engine_level(const Level& level) {
  if (level.modulus() > kMaxEngineModulus) {
    throw ResourceLimit("level " + to_string(level) + " exceeds the engine modulus limit of " +
                        std::to_string(kMaxEngineModulus));
  }
  if (static_cast<std::size_t>(level.k()) > kMaxSpeeds) {
    throw std::invalid_argument("k exceeds the engine limit of " + std::to_string(kMaxSpeeds));
  }
}

/// Per-chunk output merged in chunk order, then sorted and deduplicated.
struct ChunkOutput {
  std::vector<SpeedSet> sets;
  std::uint64_t examined = 0;
  std::uint64_t visited = 0;
};

/// Shared guard on the number of retained sets.
class SetBudget {
 public:
  explicit SetBudget(std::uint64_t limit) : limit_(limit) {}
  void charge(std::uint64_t n) {
    if (limit_ != 0 && used_.fetch_add(n, std::memory_order_relaxed) + n > limit_) {
      throw ResourceLimit("improper collection exceeds " + std::to_string(limit_) + " sets");
    }
  }

 private:
  std::uint64_t limit_;
  std::atomic<std::uint64_t> used_{0};
};

ImproperCollection assemble(const Level& level, Representation representation, std::vector<ChunkOutput>& chunks,
                            std::chrono::steady_clock::time_point start);

/// Canonical lifts of a value from modulus `from_n` to modulus from_n * c.
std::vector<Residue> lifts_of(Residue v, std::uint32_t from_n, std::uint32_t c, Representation r);

/// Canonical reduction of a set to a dividing modulus.
SpeedSet project(const SpeedSet& set, std::uint32_t to_n, Representation r);

/// Lifts source sets to the target table and keeps the improper completions
/// (the fused shadow + classification kernel). Buffers are reused across
/// sources; one instance per chunk.
class Lifter {
 public:
  Lifter(const WitnessTable& table, Representation representation, ChunkOutput& out, SetBudget& budget);

  void lift(const SpeedSet& source, std::uint32_t source_n);

 private:
  template <std::size_t W>
  void search(std::size_t j, int used);
  void emit(int used);

  const WitnessTable& table_;
  Representation representation_;
  ChunkOutput& out_;
  SetBudget& budget_;
  int k_;
  std::size_t nw_;
  std::size_t positions_ = 0;
  std::vector<std::vector<Residue>> lifts_;
  std::vector<std::size_t> mask_offset_;  // into mask_and_, per position
  std::vector<Word> mask_and_;           // AND of the rows selected by each mask
  std::vector<Word> suffix_;             // AND of every lift of positions >= j
  std::vector<Word> acc_;                // running AND per depth
  Residue chosen_[kMaxSpeeds]{};
};

/// Classifies a candidate at the table's level; appends it when improper.
void classify_into(const SpeedSet& candidate, const WitnessTable& table, ChunkOutput& out, SetBudget& budget);

}  // namespace lrc::detail
