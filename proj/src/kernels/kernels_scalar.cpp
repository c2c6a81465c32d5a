#include <bit>
#include <cmath>
#include <cstddef>

#include "kglab/kernels.hpp"
#include "sincos_poly.hpp"

namespace kglab::simd {
namespace detail {
namespace {

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline void turn_to_cos_sin(std::uint64_t u, double& c, double& s) {
  std::uint64_t shifted = u + kHalfOctant;
  std::uint64_t q = shifted >> 62;
  std::uint64_t v = (shifted & kQuarterMask) >> kOffsetShift;
  double dv = std::bit_cast<double>(v | kMagicBits) - kMagic;
  double th = (dv - kOffsetCenter) * kRadPerUnit;
  double z = th * th;

  double sp = kSin[7];
  for (int i = 6; i >= 0; --i) sp = sp * z + kSin[i];
  double cp = kCos[8];
  for (int i = 7; i >= 0; --i) cp = cp * z + kCos[i];
  double sn = th * sp;

  double re = (q & 1) ? sn : cp;
  double im = (q & 1) ? cp : sn;
  if ((q + 1) & 2) re = -re;
  if (q & 2) im = -im;
  c = re;
  s = im;
}

}  // namespace

std::complex<double> phase_sum_scalar(std::span<const std::uint64_t> phases,
                                      std::span<const double> weights) {
  Neumaier re, im;
  const bool unit = weights.empty();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    double c, s;
    turn_to_cos_sin(phases[i], c, s);
    if (unit) {
      re.add(c);
      im.add(s);
    } else {
      re.add(weights[i] * c);
      im.add(weights[i] * s);
    }
  }
  return {re.value(), im.value()};
}

void convolve_scalar(std::span<const double> a, std::span<const double> b,
                     std::span<double> out) {
  for (auto& v : out) v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    double* dst = out.data() + i;
    for (std::size_t j = 0; j < b.size(); ++j) dst[j] += ai * b[j];
  }
}

}  // namespace detail

std::complex<double> unit_phase(std::uint64_t u) {
  double c, s;
  detail::turn_to_cos_sin(u, c, s);
  return {c, s};
}

}  // namespace kglab::simd
