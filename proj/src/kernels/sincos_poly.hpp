// Shared constants for the turn -> (cos, sin) reduction used by every kernel.
//
// A phase u is a fraction of a full turn scaled by 2^64. Adding 2^61 and
// taking the top two bits gives the nearest quarter turn q; the remaining
// 62 bits (shifted down to 52) give an offset in [-pi/4, pi/4). The offset
// goes through the magic-number int->double trick so the AVX2 path needs no
// 64-bit integer conversion instruction.
#pragma once

#include <cstdint>
#include <numbers>

namespace kglab::simd::detail {

inline constexpr std::uint64_t kHalfOctant = std::uint64_t{1} << 61;
inline constexpr std::uint64_t kQuarterMask = (std::uint64_t{1} << 62) - 1;
inline constexpr int kOffsetShift = 10;
inline constexpr std::uint64_t kMagicBits = 0x4330000000000000ULL;  // 2^52
inline constexpr double kMagic = 4503599627370496.0;                // 2^52
inline constexpr double kOffsetCenter = 2251799813685248.0;         // 2^51
inline constexpr double kRadPerUnit = 2.0 * std::numbers::pi / 18014398509481984.0;  // 2pi / 2^54

// Taylor coefficients, Horner order in z = theta^2. Truncation error on
// |theta| <= pi/4 is below 5e-17.
inline constexpr double kSin[] = {
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0,
};
inline constexpr double kCos[] = {
    1.0,
    -1.0 / 2.0,
    1.0 / 24.0,
    -1.0 / 720.0,
    1.0 / 40320.0,
    -1.0 / 3628800.0,
    1.0 / 479001600.0,
    -1.0 / 87178291200.0,
    1.0 / 20922789888000.0,
};

}  // namespace kglab::simd::detail
