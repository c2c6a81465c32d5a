#include "kglab/phase.hpp"

#include <algorithm>
#include <cmath>

#include "kglab/error.hpp"

namespace kglab {

Frequency Frequency::from_double(double alpha) {
  if (!std::isfinite(alpha)) throw InvalidArgument("frequency must be finite");
  Frequency f;
  double whole = std::floor(alpha);
  if (std::fabs(whole) > 9.0e18) throw RangeError("frequency too large");
  f.whole = static_cast<std::int64_t>(whole);
  double rest = alpha - whole;  // exact: same binade or finer
  double top = std::ldexp(rest, 64);
  double top_int = std::floor(top);
  double bottom = std::ldexp(top - top_int, 64);
  f.frac = (static_cast<u128>(static_cast<std::uint64_t>(top_int)) << 64) |
           static_cast<u128>(static_cast<std::uint64_t>(bottom));
  return f;
}

Frequency Frequency::from_rational(std::int64_t a, std::uint64_t q) {
  if (q == 0) throw InvalidArgument("zero denominator");
  std::int64_t qq = static_cast<std::int64_t>(q);
  std::int64_t whole = a / qq;
  std::int64_t r = a % qq;
  if (r < 0) {
    r += qq;
    whole -= 1;
  }
  u128 num = static_cast<u128>(static_cast<std::uint64_t>(r)) << 64;
  u128 hi = num / q;
  u128 rem = num % q;
  u128 lo = (rem << 64) / q;
  Frequency f;
  f.whole = whole;
  f.frac = (hi << 64) | lo;
  return f;
}

double Frequency::frac_double() const {
  double hi = static_cast<double>(static_cast<std::uint64_t>(frac >> 64));
  double lo = static_cast<double>(static_cast<std::uint64_t>(frac));
  double v = std::ldexp(hi, -64) + std::ldexp(lo, -128);
  return std::min(v, std::nextafter(1.0, 0.0));
}

double Frequency::to_double() const { return static_cast<double>(whole) + frac_double(); }

Frequency Frequency::negated() const {
  Frequency f;
  if (frac == 0) {
    f.whole = -whole;
    f.frac = 0;
  } else {
    f.whole = -whole - 1;
    f.frac = static_cast<u128>(0) - frac;
  }
  return f;
}

u128 checked_power(std::uint64_t m, int k) {
  if (k < 0) throw InvalidArgument("negative exponent");
  u128 acc = 1;
  constexpr u128 limit = static_cast<u128>(1) << 127;
  for (int i = 0; i < k; ++i) {
    u128 next;
    if (__builtin_mul_overflow(acc, static_cast<u128>(m), &next) || next >= limit)
      throw RangeError("m^k exceeds 127-bit range");
    acc = next;
  }
  return acc;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  u128 result = 1;
  u128 base = b % m;
  while (e) {
    if (e & 1) result = result * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace kglab
