// Data-parallel inner loops with a portable scalar reference and an AVX2
// variant. The variant is chosen once at startup; KGLAB_SIMD=scalar|avx2
// forces a level (an unavailable level falls back to scalar).
#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace kglab::simd {

enum class Level { Scalar, Avx2 };

// Sum of weights[i] * e(phases[i] / 2^64), Neumaier-compensated.
// An empty weight span means unit weights.
using PhaseSumFn = std::complex<double> (*)(std::span<const std::uint64_t> phases,
                                            std::span<const double> weights);

// Full linear convolution: out[i + j] = sum a[i] * b[j].
// out.size() must equal a.size() + b.size() - 1; out is overwritten.
using ConvolveFn = void (*)(std::span<const double> a, std::span<const double> b,
                            std::span<double> out);

struct KernelTable {
  Level level;
  const char* name;
  PhaseSumFn phase_sum;
  ConvolveFn convolve;
};

bool level_available(Level level);
const KernelTable& kernels_for(Level level);
const KernelTable& active_kernels();

// e(u / 2^64) for a single phase, computed with the same reduction and
// polynomial as the vector kernels.
std::complex<double> unit_phase(std::uint64_t u);

namespace detail {
std::complex<double> phase_sum_scalar(std::span<const std::uint64_t> phases,
                                      std::span<const double> weights);
void convolve_scalar(std::span<const double> a, std::span<const double> b,
                     std::span<double> out);
std::complex<double> phase_sum_avx2(std::span<const std::uint64_t> phases,
                                    std::span<const double> weights);
void convolve_avx2(std::span<const double> a, std::span<const double> b,
                   std::span<double> out);
}  // namespace detail

}  // namespace kglab::simd
