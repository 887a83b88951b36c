#include "lrc/modmath.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace lrc {

Level::Level(int k, std::uint32_t ell, std::uint32_t p) : k_(k), ell_(ell), p_(p), modulus_(0) {
  if (k < 2) throw std::invalid_argument("level: k must be at least 2");
  if (ell < 1) throw std::invalid_argument("level: ell must be positive");
  if (p < 2) throw std::invalid_argument("level: p must be at least 2");
  const std::uint64_t n = std::uint64_t{ell} * p;
  if (n > 0x7fffffffu) throw std::invalid_argument("level: ell*p too large");
  modulus_ = static_cast<std::uint32_t>(n);
}

std::string to_string(const Level& level) {
  return "(k=" + std::to_string(level.k()) + ", ell=" + std::to_string(level.ell()) +
         ", p=" + std::to_string(level.p()) + ")";
}

std::size_t BitVector::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::vector<std::size_t> BitVector::positions() const {
  std::vector<std::size_t> out;
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    for (auto w = words_[wi]; w != 0; w &= w - 1) {
      out.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
    }
  }
  return out;
}

ResidueUniverse build_universe(const Level& level) {
  ResidueUniverse u{level, {}};
  u.members.reserve(std::size_t{level.ell()} * (level.p() - 1));
  for (Residue r = 1; r < level.modulus(); ++r) {
    if (r % level.p() != 0) u.members.push_back(r);
  }
  return u;
}

AdmissibleTimes admissible_times(const Level& level) {
  const std::uint32_t n = level.modulus();
  AdmissibleTimes a{level, BitVector(n)};
  for (std::uint32_t r = 1; r < n; ++r) {
    if (is_admissible(r, n, level.k())) a.good.set(r);
  }
  return a;
}

std::optional<GcdWitness> gcd_witness(std::span<const Residue> values, const Level& level,
                                      bool full_size) {
  if (values.empty()) throw std::invalid_argument("gcd_witness: empty value list");
  for (auto v : values) {
    if (!level.in_universe(v)) {
      throw std::invalid_argument("gcd_witness: value " + std::to_string(v) +
                                  " outside B" + to_string(level));
    }
  }
  const std::uint64_t n = level.modulus();
  if (!full_size) {
    std::uint64_t g = n;
    for (auto v : values) g = std::gcd(g, std::uint64_t{v});
    if (g > 1) return GcdWitness{g, std::nullopt};
    return std::nullopt;
  }
  if (values.size() < 2) throw std::invalid_argument("gcd_witness: full-size set needs two values");

  // prefix[i] = gcd(n, v_0..v_{i-1}), suffix[i] = gcd(n, v_i..v_{m-1})
  const std::size_t m = values.size();
  std::vector<std::uint64_t> prefix(m + 1, n), suffix(m + 1, n);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = std::gcd(prefix[i], std::uint64_t{values[i]});
  for (std::size_t i = m; i-- > 0;) suffix[i] = std::gcd(suffix[i + 1], std::uint64_t{values[i]});

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (auto i : order) {
    const std::uint64_t g = std::gcd(prefix[i], suffix[i + 1]);
    if (g > 1) return GcdWitness{g, values[i]};
  }
  return std::nullopt;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto q : kBases) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t from, std::uint64_t to) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = from; n <= to; ++n) {
    if (is_prime(n)) out.push_back(n);
    if (n == UINT64_MAX) break;
  }
  return out;
}

BoundValue bound_C(int k) {
  if (k < 2) throw std::invalid_argument("bound_C: k must be at least 2");
  BoundValue b;
  b.k = k;
  const BigInt pairs = BigInt(k + 1) * k / 2;
  const BigInt numerator = boost::multiprecision::pow(pairs, static_cast<unsigned>(k - 1));
  b.inner = Rational(numerator, BigInt(k));
  b.integral = boost::multiprecision::denominator(b.inner) == 1;
  const BigInt floored = numerator / k;
  b.value = boost::multiprecision::pow(floored, static_cast<unsigned>(k));
  return b;
}

ProductComparison product_exceeds_bound(std::span<const std::uint64_t> primes, int k) {
  ProductComparison c;
  c.bound = bound_C(k);
  c.product = 1;
  std::set<std::uint64_t> seen;
  for (auto q : primes) {
    if (q < 2) throw std::invalid_argument("product_exceeds_bound: entry below 2");
    if (!is_prime(q)) throw std::invalid_argument("product_exceeds_bound: " + std::to_string(q) + " is not prime");
    if (!seen.insert(q).second) throw std::invalid_argument("product_exceeds_bound: duplicate prime " + std::to_string(q));
    c.product *= q;
  }
  c.exceeds = c.product > c.bound.value;
  return c;
}

BigInt pow10(unsigned exponent) { return boost::multiprecision::pow(BigInt(10), exponent); }

std::size_t decimal_digits(const BigInt& value) {
  if (value < 0) return decimal_digits(-value);
  return value.str().size();
}

}  // namespace lrc
