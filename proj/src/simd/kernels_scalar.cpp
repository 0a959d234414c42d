#include "codelineage/simd/kernels.hpp"

namespace codelineage::simd {

namespace {

void project_scalar(const double* soa, std::size_t stride, std::size_t count, const double* dir, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < kDims; ++d) {
      const double prod = dir[d] * soa[d * stride + i];
      acc = acc + prod;
    }
    out[i] = acc;
  }
}

void squared_distance_scalar(const double* soa, std::size_t stride, std::size_t count, const double* query,
                             double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t d = 0; d < kDims; ++d) {
      const double diff = soa[d * stride + i] - query[d];
      const double sq = diff * diff;
      acc = acc + sq;
    }
    out[i] = acc;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", &project_scalar, &squared_distance_scalar};
  return k;
}

}  // namespace codelineage::simd
