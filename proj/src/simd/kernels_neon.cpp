#include <arm_neon.h>

#include "codelineage/simd/kernels.hpp"

namespace codelineage::simd {

namespace detail {

void project_neon(const double* soa, std::size_t stride, std::size_t count, const double* dir, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t d = 0; d < kDims; ++d)
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(dir[d]), vld1q_f64(soa + d * stride + i)));
    vst1q_f64(out + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < kDims; ++d) acc = acc + dir[d] * soa[d * stride + i];
    out[i] = acc;
  }
}

void squared_distance_neon(const double* soa, std::size_t stride, std::size_t count, const double* query,
                           double* out) {
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t d = 0; d < kDims; ++d) {
      const float64x2_t diff = vsubq_f64(vld1q_f64(soa + d * stride + i), vdupq_n_f64(query[d]));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    vst1q_f64(out + i, acc);
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
