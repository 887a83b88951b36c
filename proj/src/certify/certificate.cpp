#include <algorithm>
#include <stdexcept>

#include "lrc/certify.hpp"

namespace lrc {

bool assumption_covers(const Assumption& assumption, int k, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (const auto* base = std::get_if<BaseAssumption>(&assumption)) {
    if (base->max_k > kKnownUpTo) {
      return fail("base assumption claims k <= " + std::to_string(base->max_k) + " but only k <= " +
                  std::to_string(kKnownUpTo) + " is known");
    }
    if (k - 1 > base->max_k) {
      return fail("k = " + std::to_string(k) + " needs the conjecture for " + std::to_string(k - 1) +
                  " speeds; the base assumption covers k <= " + std::to_string(base->max_k));
    }
    return true;
  }
  const auto& prior = std::get<std::shared_ptr<const Certificate>>(assumption);
  if (!prior) return fail("missing prior certificate");
  if (prior->k != k - 1) {
    return fail("prior certificate is for k = " + std::to_string(prior->k) + ", need k = " + std::to_string(k - 1));
  }
  if (!prior->proven) return fail("prior certificate for k = " + std::to_string(prior->k) + " is not proven");
  std::string inner;
  if (!assumption_covers(prior->assumption, prior->k, &inner)) return fail("prior certificate: " + inner);
  return true;
}

Certificate build_certificate(int k, std::vector<PrimeResult> results, Assumption assumption) {
  std::string why;
  if (!assumption_covers(assumption, k, &why)) throw ChainError("broken assumption chain: " + why);

  std::sort(results.begin(), results.end(), [](const PrimeResult& a, const PrimeResult& b) { return a.p < b.p; });
  Certificate c;
  c.k = k;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.k != k) {
      throw std::invalid_argument("result for p = " + std::to_string(r.p) + " has k = " + std::to_string(r.k));
    }
    if (r.status != PrimeStatus::empty) {
      throw std::invalid_argument("result for p = " + std::to_string(r.p) + " is " + to_string(r.status));
    }
    if (!r.certificate_grade) {
      throw std::invalid_argument("result for p = " + std::to_string(r.p) + " used plan " + r.plan +
                                  ", which does not end at k+1");
    }
    if (i > 0 && results[i - 1].p == r.p) throw std::invalid_argument("duplicate prime " + std::to_string(r.p));
    c.primes.push_back(r.p);
    const auto sealed = seal(to_json(r));
    c.results.push_back({r.p, r.plan, sealed["content_hash"]["digest"].get<std::string>()});
  }
  const ProductComparison cmp = product_exceeds_bound(c.primes, k);
  c.product = cmp.product;
  c.bound = cmp.bound.value;
  c.bound_integral = cmp.bound.integral;
  c.exceeds = cmp.exceeds;
  c.proven = c.exceeds;
  c.assumption = std::move(assumption);
  return c;
}

}  // namespace lrc
