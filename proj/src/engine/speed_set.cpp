#include <algorithm>

#include "lrc/engine.hpp"

namespace lrc {

SpeedSet::SpeedSet(std::initializer_list<Residue> values)
    : SpeedSet(std::span<const Residue>(values.begin(), values.size())) {}

SpeedSet::SpeedSet(std::span<const Residue> values) {
  if (values.size() > kMaxSpeeds) throw std::invalid_argument("speed set: too many values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0xffffu) throw std::invalid_argument("speed set: residue too large");
    if (i > 0 && values[i] <= values[i - 1]) {
      throw std::invalid_argument("speed set: values must be strictly increasing");
    }
    values_[i] = static_cast<std::uint16_t>(values[i]);
  }
  size_ = static_cast<std::uint8_t>(values.size());
}

SpeedSet SpeedSet::from_unsorted(std::span<const Residue> values) {
  std::vector<Residue> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    throw std::invalid_argument("speed set: duplicate value");
  }
  return SpeedSet(std::span<const Residue>(v));
}

std::vector<Residue> SpeedSet::to_vector() const { return {values_.begin(), values_.begin() + size_}; }

bool operator==(const SpeedSet& a, const SpeedSet& b) {
  return a.size_ == b.size_ && std::equal(a.values_.begin(), a.values_.begin() + a.size_, b.values_.begin());
}

std::strong_ordering operator<=>(const SpeedSet& a, const SpeedSet& b) {
  return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.begin() + a.size_,
                                                b.values_.begin(), b.values_.begin() + b.size_);
}

std::string to_string(const SpeedSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(set[i]);
  }
  return out + "}";
}

std::string to_string(Representation r) {
  return r == Representation::literal ? "literal" : "sign-reduced";
}

Representation parse_representation(std::string_view text) {
  if (text == "literal") return Representation::literal;
  if (text == "sign-reduced") return Representation::sign_reduced;
  throw std::invalid_argument("unknown representation '" + std::string(text) + "'");
}

std::vector<Residue> universe_members(const Level& level, Representation r) {
  std::vector<Residue> out;
  const std::uint32_t n = level.modulus();
  for (Residue u = 1; u < n; ++u) {
    if (u % level.p() == 0) continue;
    if (canonical_residue(u, n, r) != u) continue;
    out.push_back(u);
  }
  return out;
}

void check_set(const SpeedSet& set, const Level& level, Representation r) {
  if (set.empty()) throw std::invalid_argument("speed set is empty");
  if (set.size() > static_cast<std::size_t>(level.k())) {
    throw std::invalid_argument("speed set " + to_string(set) + " has more than k values");
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Residue v = set[i];
    if (!level.in_universe(v)) {
      throw std::invalid_argument("value " + std::to_string(v) + " outside B" + to_string(level));
    }
    if (canonical_residue(v, level.modulus(), r) != v) {
      throw std::invalid_argument("value " + std::to_string(v) + " is not sign-reduced");
    }
  }
}

std::string to_string(const ProperStatus& status) {
  if (const auto* t = std::get_if<TimeWitness>(&status)) return "time-witness t=" + std::to_string(t->t);
  if (const auto* g = std::get_if<GcdWitness>(&status)) {
    std::string s = "gcd-witness d=" + std::to_string(g->divisor);
    if (g->removed) s += " removed=" + std::to_string(*g->removed);
    return s;
  }
  return "improper";
}

Rational NodeStats::survival() const {
  if (examined == 0) return Rational(0);
  return Rational(BigInt(improper), BigInt(examined));
}

bool ImproperCollection::contains(const SpeedSet& s) const {
  return std::binary_search(sets.begin(), sets.end(), s);
}

}  // namespace lrc
