#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace codelineage::simd {

// Characteristic vectors have nine dimensions.
inline constexpr std::size_t kDims = 9;
// Column padding so vector kernels can load full registers without tails.
inline constexpr std::size_t kLaneAlign = 4;

// Structure-of-arrays block: row d holds dimension d of every vector.
// Rows are `stride` doubles apart; padding columns are zero.
class VectorBlock {
 public:
  VectorBlock() = default;
  explicit VectorBlock(std::size_t count)
      : count_(count), stride_((count + kLaneAlign - 1) / kLaneAlign * kLaneAlign), data_(kDims * stride_, 0.0) {}

  std::size_t count() const { return count_; }
  std::size_t stride() const { return stride_; }
  double* row(std::size_t d) { return data_.data() + d * stride_; }
  const double* row(std::size_t d) const { return data_.data() + d * stride_; }
  const double* data() const { return data_.data(); }
  void set(std::size_t i, std::size_t d, double v) { data_[d * stride_ + i] = v; }

 private:
  std::size_t count_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> data_;
};

// Kernel table. Every variant accumulates dimensions in order 0..8 with a
// separate multiply and add per step, so all variants are bitwise identical
// to the scalar reference.
struct Kernels {
  std::string_view name;
  // out[i] = sum_d dir[d] * x[d][i], for i in [0, count)
  void (*project)(const double* soa, std::size_t stride, std::size_t count, const double* dir, double* out);
  // out[i] = sum_d (x[d][i] - query[d])^2
  void (*squared_distance)(const double* soa, std::size_t stride, std::size_t count, const double* query,
                           double* out);
};

const Kernels& scalar_kernels();
// nullptr when the variant is not compiled in or the CPU lacks support.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

// Best available variant. Setting CODELINEAGE_SIMD=scalar forces the reference.
const Kernels& active_kernels();

}  // namespace codelineage::simd
