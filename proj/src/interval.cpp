#include "kglab/interval.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numeric>

#include "kglab/error.hpp"
#include "kglab/phase.hpp"

namespace kglab {
namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;

// Values within this distance of an integer are taken to be that integer.
const Real50 kGuard("1e-30");

std::uint64_t integer_root(std::uint64_t v, int k) {
  auto r = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(v), 1.0 / k)));
  auto pow_cmp = [&](std::uint64_t b) -> int {
    u128 acc = 1;
    for (int i = 0; i < k; ++i) {
      acc *= b;
      if (acc > v) return 1;
    }
    return acc == v ? 0 : -1;
  };
  while (r > 0 && pow_cmp(r) > 0) --r;
  while (pow_cmp(r + 1) <= 0) ++r;
  return r;
}

// floor(v), snapping to the nearest integer inside the guard band.
// `exact_integer` reports whether v sits on an integer.
std::int64_t guarded_floor(const Real50& v, bool& exact_integer) {
  Real50 nearest = boost::multiprecision::round(v);
  if (boost::multiprecision::abs(v - nearest) < kGuard) {
    exact_integer = true;
    return nearest.convert_to<std::int64_t>();
  }
  exact_integer = false;
  return boost::multiprecision::floor(v).convert_to<std::int64_t>();
}

ShortInterval make_window(const Real50& x, const Real50& y, double theta, int k) {
  ShortInterval w;
  w.x = x.convert_to<double>();
  w.y = y.convert_to<double>();
  w.theta = theta;
  w.k = k;
  bool on_integer = false;
  w.lo = guarded_floor(x - y, on_integer) + 1;  // open at the left end
  w.hi = guarded_floor(x + y, on_integer);      // closed at the right end
  return w;
}

}  // namespace

ShortInterval ShortInterval::from_center(double x, double theta, int k) {
  require(k >= 2, "k must be >= 2");
  require(x >= 1.0, "x must be >= 1");
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  Real50 xr(x);
  Real50 yr = theta == 1.0 ? xr : boost::multiprecision::pow(xr, Real50(theta));
  ShortInterval w = make_window(xr, yr, theta, k);
  if (w.hi < w.lo) throw InvalidArgument("empty window");
  return w;
}

ShortInterval ShortInterval::from_range(std::int64_t lo, std::int64_t hi, int k) {
  require(k >= 2, "k must be >= 2");
  require(lo >= 1 && hi >= lo, "window range must satisfy 1 <= lo <= hi");
  ShortInterval w;
  w.k = k;
  w.lo = lo;
  w.hi = hi;
  w.x = 0.5 * static_cast<double>(lo + hi);
  w.y = 0.5 * static_cast<double>(hi - lo + 1);
  w.theta = std::log(w.y) / std::log(w.x);
  if (!(w.theta > 0.0)) w.theta = 1.0;
  return w;
}

ShortInterval build_interval(std::int64_t n, int k, int s, double theta) {
  require(k >= 2 && k <= 64, "k must lie in [2, 64]");
  require(s >= 1, "s must be >= 1");
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  require(n >= 1, "n must be positive");
  // n >= s * 2^k
  if (k < 62) {
    i128 floor_n = static_cast<i128>(s) << k;
    require(static_cast<i128>(n) >= floor_n, "n must be at least s * 2^k");
  } else {
    throw InvalidArgument("n must be at least s * 2^k");
  }

  Real50 x;
  bool exact_center = false;
  if (n % s == 0) {
    auto ratio = static_cast<std::uint64_t>(n / s);
    std::uint64_t r = integer_root(ratio, k);
    u128 rk = 1;
    for (int i = 0; i < k; ++i) rk *= r;
    if (rk == ratio) {
      x = Real50(r);
      exact_center = true;
    }
  }
  if (!exact_center)
    x = boost::multiprecision::pow(Real50(n) / Real50(s), Real50(1) / Real50(k));
  Real50 y = theta == 1.0 ? x : boost::multiprecision::pow(x, Real50(theta));

  ShortInterval w = make_window(x, y, theta, k);
  if (w.hi < w.lo) throw InvalidArgument("empty window");
  return w;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return out;
}

PrimeTable primes_in_interval(const ShortInterval& interval, std::int64_t width_cap) {
  require(interval.hi >= interval.lo, "empty window");
  if (interval.hi - interval.lo + 1 > width_cap)
    throw ResourceError("window width exceeds sieve cap");
  PrimeTable table;
  table.interval = interval;
  const auto lo = static_cast<std::uint64_t>(interval.lo);
  const auto hi = static_cast<std::uint64_t>(interval.hi);
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi)));
  while ((root + 1) * (root + 1) <= hi) ++root;
  while (root * root > hi) --root;
  table.small_primes = primes_up_to(root);

  std::vector<std::uint8_t> mark(kSieveBlock);
  for (std::uint64_t start = lo; start <= hi; start += kSieveBlock) {
    std::uint64_t end = std::min<std::uint64_t>(hi, start + kSieveBlock - 1);
    std::size_t len = end - start + 1;
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (std::uint64_t p : table.small_primes) {
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t m = first; m <= end; m += p) mark[m - start] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      std::uint64_t m = start + i;
      if (mark[i] && m >= 2) table.primes.push_back(m);
    }
    if (end == hi) break;
  }
  return table;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (m % p == 0) return m == p;
  }
  std::uint64_t d = m - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = static_cast<std::uint64_t>(static_cast<u128>(x) * x % m);
      if (x == m - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t m) {
  require(m >= 1, "factorize needs m >= 1");
  std::vector<std::pair<std::uint64_t, int>> out;
  auto strip = [&](std::uint64_t p) {
    if (m % p) return;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= m; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

double von_mangoldt(std::uint64_t m) {
  if (m < 2) return 0.0;
  auto f = factorize(m);
  return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

int moebius(std::uint64_t m) {
  int sign = 1;
  for (auto [p, e] : factorize(m)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t phi = m;
  for (auto [p, e] : factorize(m)) phi = phi / p * (p - 1);
  return phi;
}

std::uint64_t divisor_count(std::uint64_t m) {
  std::uint64_t t = 1;
  for (auto [p, e] : factorize(m)) t *= static_cast<std::uint64_t>(e + 1);
  return t;
}

ArithFunction parse_arith_function(std::string_view name) {
  if (name == "von-mangoldt") return ArithFunction::VonMangoldt;
  if (name == "moebius") return ArithFunction::Moebius;
  if (name == "euler-phi") return ArithFunction::EulerPhi;
  if (name == "divisor-count") return ArithFunction::DivisorCount;
  throw InvalidArgument("unknown arithmetic function");
}

double point_function(ArithFunction fn, std::uint64_t m) {
  require(m >= 1, "arithmetic functions need m >= 1");
  switch (fn) {
    case ArithFunction::VonMangoldt:
      return von_mangoldt(m);
    case ArithFunction::Moebius:
      return moebius(m);
    case ArithFunction::EulerPhi:
      return static_cast<double>(euler_phi(m));
    case ArithFunction::DivisorCount:
      return static_cast<double>(divisor_count(m));
  }
  return 0.0;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace kglab
