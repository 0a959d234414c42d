#include <doctest.h>

#include <cstring>
#include <random>

#include "codelineage/simd/kernels.hpp"

using namespace codelineage::simd;

namespace {

VectorBlock random_block(std::mt19937_64& rng, std::size_t n) {
  VectorBlock b(n);
  std::uniform_int_distribution<int> v(0, 200);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < kDims; ++d) b.set(i, d, v(rng));
  return b;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void compare(const Kernels& ref, const Kernels& alt) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 17u, 64u, 1023u}) {
    auto block = random_block(rng, n);
    double dir[kDims], query[kDims];
    for (std::size_t d = 0; d < kDims; ++d) {
      dir[d] = g(rng);
      query[d] = static_cast<double>(rng() % 200);
    }
    std::vector<double> p1(n), p2(n), d1(n), d2(n);
    ref.project(block.data(), block.stride(), n, dir, p1.data());
    alt.project(block.data(), block.stride(), n, dir, p2.data());
    ref.squared_distance(block.data(), block.stride(), n, query, d1.data());
    alt.squared_distance(block.data(), block.stride(), n, query, d2.data());
    CAPTURE(n);
    CHECK(bitwise_equal(p1, p2));
    CHECK(bitwise_equal(d1, d2));
  }
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar reference values") {
    VectorBlock b(2);
    for (std::size_t d = 0; d < kDims; ++d) {
      b.set(0, d, 1.0);
      b.set(1, d, static_cast<double>(d));
    }
    double dir[kDims] = {1, 0, 0, 0, 0, 0, 0, 0, 2};
    double out[2];
    scalar_kernels().project(b.data(), b.stride(), 2, dir, out);
    CHECK(out[0] == 3.0);
    CHECK(out[1] == 16.0);
    double q[kDims] = {};
    scalar_kernels().squared_distance(b.data(), b.stride(), 2, q, out);
    CHECK(out[0] == 9.0);
    CHECK(out[1] == 204.0);
  }

  TEST_CASE("avx2 matches scalar bit for bit") {
    const Kernels* k = avx2_kernels();
    if (k == nullptr) {
      MESSAGE("AVX2 variant unavailable on this host");
      return;
    }
    compare(scalar_kernels(), *k);
  }

  TEST_CASE("neon matches scalar bit for bit") {
    const Kernels* k = neon_kernels();
    if (k == nullptr) {
      MESSAGE("NEON variant unavailable on this host");
      return;
    }
    compare(scalar_kernels(), *k);
  }

  TEST_CASE("active kernels resolve") {
    const auto& k = active_kernels();
    CHECK_FALSE(k.name.empty());
    compare(scalar_kernels(), k);
  }

  TEST_CASE("block padding") {
    VectorBlock b(5);
    CHECK(b.count() == 5);
    CHECK(b.stride() == 8);
    CHECK(b.row(1) - b.row(0) == 8);
  }
}
