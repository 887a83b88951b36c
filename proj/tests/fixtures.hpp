#pragma once

// Stand-ins for per-prime receipts, used where re-running every prime of a
// list would take far too long for a unit test. Certificates only consume
// the status, k, p and plan of each result.

#include <vector>

#include "lrc/certify.hpp"

inline lrc::PrimeResult empty_fixture(int k, std::uint64_t p) {
  lrc::PrimeResult r;
  r.k = k;
  r.p = p;
  const auto plan = lrc::default_plan(k, static_cast<std::uint32_t>(p));
  r.plan = plan.to_string();
  r.status = lrc::PrimeStatus::empty;
  std::uint64_t examined = 1000;
  for (auto ell : plan.nodes()) {
    lrc::NodeRecord n;
    n.ell = ell;
    n.stats.examined = examined;
    n.stats.improper = ell == plan.terminal() ? 0 : examined / 10;
    n.stats.visited = examined / 2;
    r.nodes.push_back(n);
    examined *= 3;
  }
  return r;
}

inline std::vector<lrc::PrimeResult> empty_fixtures(int k, const std::vector<std::uint64_t>& primes) {
  std::vector<lrc::PrimeResult> out;
  for (auto p : primes) out.push_back(empty_fixture(k, p));
  return out;
}
