// Compiled with -mavx2 -mfma; only reached when the CPU reports both.
#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "kglab/kernels.hpp"
#include "sincos_poly.hpp"

namespace kglab::simd::detail {
namespace {

struct NeumaierLanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  void add(__m256d v) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d t = _mm256_add_pd(sum, v);
    __m256d big_sum = _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask),
                                    _mm256_and_pd(v, abs_mask), _CMP_GE_OQ);
    __m256d when_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
    __m256d when_v = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(when_v, when_sum, big_sum));
    sum = t;
  }
};

// Scalar Neumaier fold of the lane partials plus a tail.
double fold(const NeumaierLanes& acc, double tail_sum, double tail_comp) {
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, acc.sum);
  _mm256_store_pd(c, acc.comp);
  double sum = 0.0, comp = 0.0;
  auto add = [&](double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  };
  for (int i = 0; i < 4; ++i) add(s[i]);
  add(tail_sum);
  for (int i = 0; i < 4; ++i) comp += c[i];
  comp += tail_comp;
  return sum + comp;
}

inline void turn_to_cos_sin4(__m256i u, __m256d& re, __m256d& im) {
  const __m256i shifted = _mm256_add_epi64(u, _mm256_set1_epi64x(static_cast<long long>(kHalfOctant)));
  const __m256i q = _mm256_srli_epi64(shifted, 62);
  const __m256i v = _mm256_srli_epi64(
      _mm256_and_si256(shifted, _mm256_set1_epi64x(static_cast<long long>(kQuarterMask))), kOffsetShift);
  const __m256d dv = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(v, _mm256_set1_epi64x(static_cast<long long>(kMagicBits)))),
      _mm256_set1_pd(kMagic));
  const __m256d th = _mm256_mul_pd(_mm256_sub_pd(dv, _mm256_set1_pd(kOffsetCenter)),
                                   _mm256_set1_pd(kRadPerUnit));
  const __m256d z = _mm256_mul_pd(th, th);

  __m256d sp = _mm256_set1_pd(kSin[7]);
  for (int i = 6; i >= 0; --i) sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(kSin[i]));
  __m256d cp = _mm256_set1_pd(kCos[8]);
  for (int i = 7; i >= 0; --i) cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(kCos[i]));
  const __m256d sn = _mm256_mul_pd(th, sp);

  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d odd = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  __m256d r = _mm256_blendv_pd(cp, sn, odd);
  __m256d i = _mm256_blendv_pd(sn, cp, odd);
  const __m256i re_sign = _mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62);
  const __m256i im_sign = _mm256_slli_epi64(_mm256_and_si256(q, two), 62);
  re = _mm256_xor_pd(r, _mm256_castsi256_pd(re_sign));
  im = _mm256_xor_pd(i, _mm256_castsi256_pd(im_sign));
}

}  // namespace

std::complex<double> phase_sum_avx2(std::span<const std::uint64_t> phases,
                                    std::span<const double> weights) {
  NeumaierLanes re_acc, im_acc;
  const bool unit = weights.empty();
  const std::size_t n = phases.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(phases.data() + i));
    __m256d re, im;
    turn_to_cos_sin4(u, re, im);
    if (!unit) {
      __m256d w = _mm256_loadu_pd(weights.data() + i);
      re = _mm256_mul_pd(re, w);
      im = _mm256_mul_pd(im, w);
    }
    re_acc.add(re);
    im_acc.add(im);
  }
  std::complex<double> tail = phase_sum_scalar(phases.subspan(i),
                                               unit ? weights : weights.subspan(i));
  return {fold(re_acc, tail.real(), 0.0), fold(im_acc, tail.imag(), 0.0)};
}

void convolve_avx2(std::span<const double> a, std::span<const double> b,
                   std::span<double> out) {
  for (auto& v : out) v = 0.0;
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const __m256d av = _mm256_set1_pd(ai);
    double* dst = out.data() + i;
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) {
      __m256d d = _mm256_loadu_pd(dst + j);
      d = _mm256_fmadd_pd(av, _mm256_loadu_pd(b.data() + j), d);
      _mm256_storeu_pd(dst + j, d);
    }
    for (; j < nb; ++j) dst[j] += ai * b[j];
  }
}

}  // namespace kglab::simd::detail
