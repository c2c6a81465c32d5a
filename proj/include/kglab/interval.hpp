// Short windows (x - y, x + y] around x = (n/s)^(1/k), prime tables and the
// standard arithmetic functions.
#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace kglab {

struct ShortInterval {
  double x = 0.0;      // center
  double y = 0.0;      // half-width
  double theta = 1.0;  // y = x^theta (informational for from_range windows)
  int k = 2;
  std::int64_t lo = 1;  // smallest integer > x - y
  std::int64_t hi = 0;  // largest integer <= x + y

  std::int64_t count() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(std::int64_t m) const { return lo <= m && m <= hi; }
  double upper() const { return x + y; }

  // Window centred at x with y = x^theta.
  static ShortInterval from_center(double x, double theta, int k);
  // Window whose integers are exactly lo..hi (x, y chosen as the midpoint and
  // half-length plus one half).
  static ShortInterval from_range(std::int64_t lo, std::int64_t hi, int k);
};

// x = (n/s)^(1/k), y = x^theta. Boundary integers are decided from 50-digit
// evaluations of x - y and x + y; x is exact whenever n/s is a perfect k-th
// power.
ShortInterval build_interval(std::int64_t n, int k, int s, double theta);

struct PrimeTable {
  ShortInterval interval;
  std::vector<std::uint64_t> primes;        // primes in the window, increasing
  std::vector<std::uint64_t> small_primes;  // primes up to sqrt(hi)
};

inline constexpr std::size_t kSieveBlock = std::size_t{1} << 16;
inline constexpr std::int64_t kDefaultSieveWidthCap = std::int64_t{1} << 32;

PrimeTable primes_in_interval(const ShortInterval& interval,
                              std::int64_t width_cap = kDefaultSieveWidthCap);

// Primes <= limit by the sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t m);

// Prime factorization by trial division; m >= 1.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t m);

enum class ArithFunction { VonMangoldt, Moebius, EulerPhi, DivisorCount };

ArithFunction parse_arith_function(std::string_view name);
double point_function(ArithFunction fn, std::uint64_t m);

double von_mangoldt(std::uint64_t m);
int moebius(std::uint64_t m);
std::uint64_t euler_phi(std::uint64_t m);
std::uint64_t divisor_count(std::uint64_t m);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace kglab
