// The modulus K(k) of the local congruence conditions and the admissible
// residue class n = s (mod K(k)).
#pragma once

#include <cstdint>
#include <vector>

#include "kglab/phase.hpp"

namespace kglab {

struct LocalFactor {
  std::uint64_t p;
  int tau;    // largest power of p dividing k
  int gamma;  // tau + 2 for p = 2 with tau > 0, tau + 1 otherwise
};

struct LocalProfile {
  int k = 2;
  std::vector<LocalFactor> factors;  // primes p with (p - 1) | k, increasing
  u128 K = 1;
};

LocalProfile local_profile(int k);

bool is_admissible(std::int64_t n, int k, int s);

// Number of s-tuples of units h mod q with h_1^k + ... + h_s^k = n (mod q),
// by iterated convolution of the k-th power residue distribution.
u128 unit_solution_count(std::int64_t n, int k, int s, std::uint64_t q);
// The same count for every residue n mod q at once.
std::vector<u128> unit_solution_distribution(int k, int s, std::uint64_t q);

}  // namespace kglab
