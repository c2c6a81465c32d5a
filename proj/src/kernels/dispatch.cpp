#include <cstdlib>
#include <string_view>

#include "kglab/kernels.hpp"

namespace kglab::simd {
namespace {

constexpr KernelTable kScalar{Level::Scalar, "scalar", &detail::phase_sum_scalar,
                              &detail::convolve_scalar};
#ifdef KGLAB_HAVE_AVX2
constexpr KernelTable kAvx2{Level::Avx2, "avx2", &detail::phase_sum_avx2,
                            &detail::convolve_avx2};
#else
constexpr KernelTable kAvx2 = kScalar;
#endif

const KernelTable& select() {
  if (const char* env = std::getenv("KGLAB_SIMD")) {
    std::string_view want(env);
    if (want == "scalar") return kScalar;
    if (want == "avx2" && level_available(Level::Avx2)) return kAvx2;
    if (want == "avx2") return kScalar;
  }
  return level_available(Level::Avx2) ? kAvx2 : kScalar;
}

}  // namespace

bool level_available(Level level) {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#ifdef KGLAB_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Level level) {
  return level == Level::Avx2 && level_available(Level::Avx2) ? kAvx2 : kScalar;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace kglab::simd
