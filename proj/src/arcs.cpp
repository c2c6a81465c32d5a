#include "kglab/arcs.hpp"

#include <cmath>
#include <numeric>

#include "kglab/error.hpp"

namespace kglab {
namespace {

// alpha reduced into (1/Q, 1 + 1/Q]: integer part 0 or 1 plus the fraction, so
// the closed arc around 1 is not split at 0.
struct Reduced {
  std::uint64_t whole;
  u128 frac;
};

Reduced reduce(const Frequency& alpha, u128 radius) {
  return {alpha.frac <= radius ? 1u : 0u, alpha.frac};
}

// q * alpha split into integer part and 128-bit fraction.
struct Scaled {
  u128 whole;
  u128 frac;
};

Scaled scale(const Reduced& r, std::uint64_t q) {
  const u128 f_hi = r.frac >> 64;
  const u128 f_lo = static_cast<std::uint64_t>(r.frac);
  const u128 low = f_lo * q;
  const u128 mid = f_hi * q + (low >> 64);
  Scaled s;
  s.whole = (mid >> 64) + static_cast<u128>(r.whole) * q;
  s.frac = (mid << 64) | static_cast<std::uint64_t>(low);
  return s;
}

// Nearest integer a to q*alpha and |q*alpha - a| in fixed point.
void nearest(const Reduced& r, std::uint64_t q, u128& a, u128& dist) {
  Scaled s = scale(r, q);
  constexpr u128 half = u128{1} << 127;
  if (s.frac <= half) {
    a = s.whole;
    dist = s.frac;
  } else {
    a = s.whole + 1;
    dist = u128{0} - s.frac;
  }
}

bool on_arc(const Reduced& r, std::uint64_t q, std::uint64_t a, u128 radius) {
  u128 near_a, dist;
  nearest(r, q, near_a, dist);
  return near_a == a && dist <= radius;
}

u128 fixed_reciprocal(double Q) {
  // 2^128 / Q in long double; Q >= 1 keeps it in range.
  long double v = std::ldexp(1.0L, 128) / static_cast<long double>(Q);
  if (v >= std::ldexp(1.0L, 128)) return ~u128{0};
  return static_cast<u128>(v);
}

}  // namespace

std::uint64_t ArcDissection::max_q() const {
  return static_cast<std::uint64_t>(std::floor(P + 1e-12));
}

ArcDissection ArcDissection::from_parameters(double P, double Q, double delta,
                                             std::size_t arc_cap) {
  require(std::isfinite(P) && P >= 1.0, "P must be >= 1");
  require(std::isfinite(Q) && Q >= 1.0, "Q must be >= 1");
  ArcDissection d;
  d.P = P;
  d.Q = Q;
  d.delta = delta;
  d.radius_ = fixed_reciprocal(Q);
  d.disjoint = 2.0 * P * P <= Q;
  const std::uint64_t qmax = d.max_q();

  std::size_t total = 0;
  for (std::uint64_t q = 1; q <= qmax; ++q) {
    std::uint64_t phi = q;
    std::uint64_t m = q;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      while (m % p == 0) m /= p;
      phi = phi / p * (p - 1);
    }
    if (m > 1) phi = phi / m * (m - 1);
    total += phi;
    if (total > arc_cap) throw ResourceError("arc count exceeds cap");
  }
  d.arcs.reserve(total);

  // Farey sequence of order qmax from 1/qmax to 1/1, generated in order.
  std::uint64_t a0 = 0, q0 = 1, a1 = 1, q1 = qmax;
  while (true) {
    d.arcs.push_back({q1, a1, static_cast<double>(a1) / static_cast<double>(q1),
                      1.0 / (static_cast<double>(q1) * Q)});
    if (a1 == 1 && q1 == 1) break;
    std::uint64_t factor = (qmax + q0) / q1;
    std::uint64_t a2 = factor * a1 - a0;
    std::uint64_t q2 = factor * q1 - q0;
    a0 = a1;
    q0 = q1;
    a1 = a2;
    q1 = q2;
  }

  if (d.disjoint) {
    // Neighbouring centers differ by 1/(q_l q_r) and the radii add up to
    // (q_l + q_r)/(q_l q_r Q). The pair (1/1, 1/qmax) is adjacent mod 1.
    for (std::size_t i = 0; i < d.arcs.size(); ++i) {
      const auto& l = d.arcs[i == 0 ? d.arcs.size() - 1 : i - 1];
      const auto& r = d.arcs[i];
      if (d.arcs.size() > 1 && static_cast<double>(l.q + r.q) >= Q)
        throw InternalError("arcs overlap although 2P^2 <= Q");
    }
  }
  return d;
}

ArcDissection build_dissection(const ShortInterval& interval, double delta, std::size_t arc_cap) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  double P = std::pow(interval.y, delta);
  double Q = std::pow(interval.x, interval.k - 2) * interval.y * interval.y / P;
  require(P >= 1.0, "P = y^delta must be >= 1");
  return ArcDissection::from_parameters(P, Q, delta, arc_cap);
}

std::optional<double> default_delta(int k, double theta) {
  if (theta <= 31.0 / 40.0) return std::nullopt;
  return std::min(0.9 / (16.0 * k), 2.0 * (theta - 31.0 / 40.0));
}

ArcClass classify(const Frequency& alpha, const ArcDissection& d) {
  const std::uint64_t qmax = d.max_q();
  const u128 radius = d.radius_fixed();
  Reduced r = reduce(alpha, radius);

  auto try_q = [&](std::uint64_t q) -> ArcClass {
    u128 a, dist;
    nearest(r, q, a, dist);
    if (dist <= radius && a >= 1 && a <= q && std::gcd(static_cast<std::uint64_t>(a), q) == 1)
      return {true, q, static_cast<std::uint64_t>(a)};
    return {};
  };

  if (!(d.Q > 2.0 * d.P)) {
    for (std::uint64_t q = 1; q <= qmax; ++q)
      if (auto c = try_q(q); c.major) return c;
    return {};
  }

  // Convergent denominators of frac(alpha) = frac / 2^128 via exact Euclid.
  std::uint64_t q_prev = 0, q_cur = 1;  // q_{-1} = 0, q_0 = 1
  if (auto c = try_q(1); c.major) return c;
  if (r.frac == 0) return {};
  u128 partial = ~u128{0} / r.frac;
  u128 rem = ~u128{0} % r.frac + 1;
  if (rem == r.frac) {
    ++partial;
    rem = 0;
  }
  u128 num = r.frac, den_rem = rem;
  while (true) {
    u128 q_next = partial * q_cur + q_prev;
    if (q_next > qmax) break;
    q_prev = q_cur;
    q_cur = static_cast<std::uint64_t>(q_next);
    if (auto c = try_q(q_cur); c.major) return c;
    if (den_rem == 0) break;
    partial = num / den_rem;
    u128 next_rem = num % den_rem;
    num = den_rem;
    den_rem = next_rem;
  }
  return {};
}

ArcClass classify(double alpha, const ArcDissection& d) {
  return classify(Frequency::from_double(alpha), d);
}

ArcClass classify_bruteforce(const Frequency& alpha, const ArcDissection& d) {
  const u128 radius = d.radius_fixed();
  Reduced r = reduce(alpha, radius);
  ArcClass best;
  for (const auto& arc : d.arcs) {
    if (best.major && arc.q >= best.q) continue;
    if (on_arc(r, arc.q, arc.a, radius)) best = {true, arc.q, arc.a};
  }
  return best;
}

double arc_offset(const Frequency& alpha, const ArcDissection& d, std::uint64_t q,
                  std::uint64_t a) {
  Reduced r = reduce(alpha, d.radius_fixed());
  Scaled s = scale(r, q);
  auto to_double = [](u128 v) {
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v >> 64)), -64) +
           std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v)), -128);
  };
  // q*alpha - a = (whole - a) + frac / 2^128
  i128 whole = static_cast<i128>(s.whole) - static_cast<i128>(a);
  if (whole == 0) return to_double(s.frac);
  if (whole == -1) return -to_double(u128{0} - s.frac);
  return static_cast<double>(whole) + to_double(s.frac);
}

double major_measure(const ArcDissection& d) {
  if (!d.disjoint) throw InvalidArgument("major-arc measure needs 2P^2 <= Q");
  double total = 0.0;
  for (const auto& arc : d.arcs) total += 2.0 / (static_cast<double>(arc.q) * d.Q);
  return total;
}

}  // namespace kglab
