// Major/minor arc dissection of (1/Q, 1 + 1/Q].
//
// The arcs are |q alpha - a| <= 1/Q for 1 <= a <= q <= P, (a, q) = 1,
// closed at both ends. Frequencies are reduced mod 1 into (1/Q, 1 + 1/Q]
// before classification.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kglab/interval.hpp"
#include "kglab/phase.hpp"

namespace kglab {

struct FareyArc {
  std::uint64_t q;
  std::uint64_t a;
  double center;
  double half_width;
};

inline constexpr std::size_t kDefaultArcCap = 10'000'000;

struct ArcDissection {
  double P = 1.0;
  double Q = 1.0;
  double delta = 0.0;
  std::vector<FareyArc> arcs;  // sorted by center
  bool disjoint = false;       // 2P^2 <= Q

  std::uint64_t max_q() const;
  // 2^128 / Q, the closed arc radius in fixed point.
  u128 radius_fixed() const { return radius_; }

  // Explicit P and Q (for the alternate Q0 = x^(k-1) y / P, or tests).
  static ArcDissection from_parameters(double P, double Q, double delta = 0.0,
                                       std::size_t arc_cap = kDefaultArcCap);

 private:
  u128 radius_ = 0;
};

// P = y^delta, Q = x^(k-2) y^2 / P.
ArcDissection build_dissection(const ShortInterval& interval, double delta,
                               std::size_t arc_cap = kDefaultArcCap);

// min(0.9 / (16k), 2(theta - 31/40)) for theta > 31/40, otherwise empty.
std::optional<double> default_delta(int k, double theta);

struct ArcClass {
  bool major = false;
  std::uint64_t q = 0;
  std::uint64_t a = 0;
};

// Production path: continued-fraction convergents of alpha. Falls back to a
// per-denominator scan when Q <= 2P, where convergents need not catch every
// arc. When arcs overlap the smallest q wins.
ArcClass classify(const Frequency& alpha, const ArcDissection& dissection);
ArcClass classify(double alpha, const ArcDissection& dissection);

// Reference path: test every arc.
ArcClass classify_bruteforce(const Frequency& alpha, const ArcDissection& dissection);

// Signed q*alpha - a as a double, for alpha reduced into (1/Q, 1 + 1/Q].
double arc_offset(const Frequency& alpha, const ArcDissection& dissection,
                  std::uint64_t q, std::uint64_t a);

// Lebesgue measure of the major arcs; requires 2P^2 <= Q.
double major_measure(const ArcDissection& dissection);

}  // namespace kglab
