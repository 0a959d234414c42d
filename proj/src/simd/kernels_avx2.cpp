#include <immintrin.h>

#include "codelineage/simd/kernels.hpp"

namespace codelineage::simd {

namespace detail {

void project_avx2(const double* soa, std::size_t stride, std::size_t count, const double* dir, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < kDims; ++d) {
      const __m256d x = _mm256_loadu_pd(soa + d * stride + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(dir[d]), x));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < kDims; ++d) acc = acc + dir[d] * soa[d * stride + i];
    out[i] = acc;
  }
}

void squared_distance_avx2(const double* soa, std::size_t stride, std::size_t count, const double* query,
                           double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < kDims; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(soa + d * stride + i), _mm256_set1_pd(query[d]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < kDims; ++d) {
      const double diff = soa[d * stride + i] - query[d];
      acc = acc + diff * diff;
    }
    out[i] = acc;
  }
}

}  // namespace detail

}  // namespace codelineage::simd
