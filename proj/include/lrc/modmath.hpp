#pragma once

// Exact arithmetic primitives shared by the engine, the oracle and the
// certificate layer: residue universes B(l,p), admissible time residues,
// gcd witnesses, primality and the product/bound comparison.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lrc {

using Residue = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sieve level: k nonzero speeds, level index ell and modulus factor p.
/// The ambient modulus is ell * p.
class Level {
 public:
  Level(int k, std::uint32_t ell, std::uint32_t p);

  int k() const { return k_; }
  std::uint32_t ell() const { return ell_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t modulus() const { return modulus_; }

  /// Same k and p, different ell.
  Level with_ell(std::uint32_t ell) const { return Level(k_, ell, p_); }

  /// True iff r is a member of B(ell, p).
  bool in_universe(std::uint64_t r) const { return r < modulus_ && r % p_ != 0; }

  friend bool operator==(const Level&, const Level&) = default;

 private:
  int k_;
  std::uint32_t ell_;
  std::uint32_t p_;
  std::uint32_t modulus_;
};

std::string to_string(const Level& level);

/// Time residue r is admissible at modulus n for k speeds iff
/// (k+1) * min(r, n-r) >= n, i.e. ||r/n|| >= 1/(k+1).
constexpr bool is_admissible(std::uint64_t r, std::uint64_t n, int k) {
  const std::uint64_t dist = r < n - r ? r : n - r;
  return static_cast<std::uint64_t>(k + 1) * dist >= n;
}

/// Fixed-length bit vector over 64-bit words. Bits past size() stay zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  std::size_t count() const;
  bool any() const;
  std::vector<std::size_t> positions() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ResidueUniverse {
  Level level;
  std::vector<Residue> members;
};

struct AdmissibleTimes {
  Level level;
  BitVector good;
};

ResidueUniverse build_universe(const Level& level);
AdmissibleTimes admissible_times(const Level& level);

/// A common divisor d > 1 of the values left after removing `removed`
/// (or of all values when `removed` is empty) together with ell*p.
struct GcdWitness {
  std::uint64_t divisor = 0;
  std::optional<Residue> removed;

  friend bool operator==(const GcdWitness&, const GcdWitness&) = default;
};

/// full_size: the values are the k distinct entries of a tuple, so one
/// value may be dropped. Otherwise the set stands for tuples with
/// repeated entries and the divisor must divide every value.
/// The first removal (in value order) that succeeds is reported.
std::optional<GcdWitness> gcd_witness(std::span<const Residue> values, const Level& level,
                                      bool full_size);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

std::vector<std::uint64_t> primes_in_range(std::uint64_t from, std::uint64_t to);

struct BoundValue {
  int k = 0;
  Rational inner;   // binom(k+1,2)^(k-1) / k
  bool integral = false;
  BigInt value;     // floor(inner)^k
};

BoundValue bound_C(int k);

struct ProductComparison {
  bool exceeds = false;
  BigInt product;
  BoundValue bound;
};

/// Rejects entries < 2, composites and duplicates.
ProductComparison product_exceeds_bound(std::span<const std::uint64_t> primes, int k);

BigInt pow10(unsigned exponent);
std::size_t decimal_digits(const BigInt& value);

}  // namespace lrc
