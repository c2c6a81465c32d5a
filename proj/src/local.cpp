#include "kglab/local.hpp"

#include <map>
#include <numeric>

#include "kglab/error.hpp"
#include "kglab/interval.hpp"

namespace kglab {

LocalProfile local_profile(int k) {
  require(k >= 2 && k <= 64, "k must lie in [2, 64]");
  LocalProfile profile;
  profile.k = k;
  for (std::uint64_t p : primes_up_to(static_cast<std::uint64_t>(k) + 1)) {
    if (k % static_cast<int>(p - 1) != 0) continue;
    int tau = 0;
    for (int v = k; v % static_cast<int>(p) == 0; v /= static_cast<int>(p)) ++tau;
    int gamma = (p == 2 && tau > 0) ? tau + 2 : tau + 1;
    profile.factors.push_back({p, tau, gamma});
    for (int i = 0; i < gamma; ++i) profile.K *= p;
  }
  return profile;
}

bool is_admissible(std::int64_t n, int k, int s) {
  require(n >= 1, "n must be positive");
  const u128 K = local_profile(k).K;
  auto residue = [&](std::int64_t v) {
    i128 r = static_cast<i128>(v) % static_cast<i128>(K);
    if (r < 0) r += static_cast<i128>(K);
    return static_cast<u128>(r);
  };
  return residue(n) == residue(s);
}

std::vector<u128> unit_solution_distribution(int k, int s, std::uint64_t q) {
  require(q >= 1 && q <= (std::uint64_t{1} << 24), "modulus out of range");
  require(s >= 1, "s must be positive");
  std::map<std::uint64_t, u128> image;  // h^k mod q -> multiplicity
  for (std::uint64_t h = 0; h < q; ++h) {
    if (std::gcd(h, q) != 1) continue;
    image[powmod(h, static_cast<std::uint64_t>(k), q)] += 1;
  }
  std::vector<u128> dist(q, 0);
  dist[0] = 1;
  for (int step = 0; step < s; ++step) {
    std::vector<u128> next(q, 0);
    for (std::uint64_t r = 0; r < q; ++r) {
      if (dist[r] == 0) continue;
      for (auto [v, c] : image) next[(r + v) % q] += dist[r] * c;
    }
    dist.swap(next);
  }
  return dist;
}

u128 unit_solution_count(std::int64_t n, int k, int s, std::uint64_t q) {
  const auto dist = unit_solution_distribution(k, s, q);
  i128 target = static_cast<i128>(n) % static_cast<i128>(q);
  if (target < 0) target += q;
  return dist[static_cast<std::size_t>(target)];
}

}  // namespace kglab
