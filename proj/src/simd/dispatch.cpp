#include <cstdlib>
#include <string_view>

#include "codelineage/simd/kernels.hpp"

namespace codelineage::simd {

namespace detail {
#if defined(CODELINEAGE_HAVE_AVX2)
void project_avx2(const double*, std::size_t, std::size_t, const double*, double*);
void squared_distance_avx2(const double*, std::size_t, std::size_t, const double*, double*);
#endif
#if defined(CODELINEAGE_HAVE_NEON)
void project_neon(const double*, std::size_t, std::size_t, const double*, double*);
void squared_distance_neon(const double*, std::size_t, std::size_t, const double*, double*);
#endif
}  // namespace detail

const Kernels* avx2_kernels() {
#if defined(CODELINEAGE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  static const Kernels k{"avx2", &detail::project_avx2, &detail::squared_distance_avx2};
  return supported ? &k : nullptr;
#else
  return nullptr;
#endif
}

const Kernels* neon_kernels() {
#if defined(CODELINEAGE_HAVE_NEON)
  static const Kernels k{"neon", &detail::project_neon, &detail::squared_distance_neon};
  return &k;
#else
  return nullptr;
#endif
}

const Kernels& active_kernels() {
  static const Kernels& chosen = [&]() -> const Kernels& {
    const char* env = std::getenv("CODELINEAGE_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const Kernels* k = avx2_kernels()) return *k;
    if (const Kernels* k = neon_kernels()) return *k;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace codelineage::simd
