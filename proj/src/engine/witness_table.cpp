#include "internal.hpp"

namespace lrc {

WitnessTable::WitnessTable(const Level& level, const AdmissibleTimes& admissible)
    : level_(level), words_((level.modulus() + 63) / 64) {
  if (!(admissible.level == level)) {
    throw std::invalid_argument("witness table: admissible times built for " + to_string(admissible.level) +
                                ", not " + to_string(level));
  }
  detail::check_engine_level(level);
  const std::uint32_t n = level.modulus();
  rows_.assign(std::size_t{n} * words_, 0);
  for (Residue v = 1; v < n; ++v) {
    if (v % level.p() == 0) continue;
    std::uint64_t* row = rows_.data() + std::size_t{v} * words_;
    std::uint32_t r = 0;  // t*v mod n, stepped with t
    for (std::uint32_t t = 0; t < n; ++t) {
      if (admissible.good.test(r)) row[t >> 6] |= std::uint64_t{1} << (t & 63);
      r += v;
      if (r >= n) r -= n;
    }
  }
}

WitnessTable build_witness_table(const Level& level, const AdmissibleTimes& admissible) {
  return WitnessTable(level, admissible);
}

WitnessTable build_witness_table(const Level& level) { return WitnessTable(level, admissible_times(level)); }

}  // namespace lrc
