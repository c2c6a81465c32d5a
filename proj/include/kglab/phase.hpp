// Fixed-point frequencies and exact power arithmetic.
//
// A frequency alpha is stored as an integer part plus a 128-bit binary
// fraction. Every double converts exactly (down to 2^-128), so the phase
// frac(m^k * alpha) is obtained by one wrapping 128-bit multiply of m^k with
// the fraction, with no cancellation however large m^k is.
#pragma once

#include <cstdint>
#include <string>

namespace kglab {

using u128 = unsigned __int128;
using i128 = __int128;

struct Frequency {
  std::int64_t whole = 0;
  u128 frac = 0;  // fractional part scaled by 2^128

  static Frequency from_double(double alpha);
  // a/q exactly rounded down at 2^-128; q >= 1, any integer a.
  static Frequency from_rational(std::int64_t a, std::uint64_t q);

  double to_double() const;
  // alpha mod 1 as a double in [0, 1).
  double frac_double() const;
  Frequency negated() const;
};

// frac(power * alpha) scaled by 2^64.
inline std::uint64_t phase_of(u128 power, const Frequency& alpha) {
  return static_cast<std::uint64_t>((power * alpha.frac) >> 64);
}

// floor(r * 2^64 / q) for 0 <= r < q.
inline std::uint64_t rational_phase(std::uint64_t r, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<u128>(r) << 64) / q);
}

// m^k, throwing RangeError when the result does not fit in 127 bits.
u128 checked_power(std::uint64_t m, int k);

// (b^e) mod m for m < 2^64.
std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m);

std::string to_string(u128 v);

}  // namespace kglab
