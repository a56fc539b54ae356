// Compiled with -mavx2 -mpopcnt -ffp-contract=off. Only reached through the
// dispatch table after a CPUID check.

#include <immintrin.h>

#include <bit>

#include "ecpf/simd/kernels.hpp"

namespace ecpf::simd {
namespace {

double reduce_lanes(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double total = reduce_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) total += a[i] * b[i];
  return total;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (std::size_t i = n4; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_sq_dist_avx2(const double* x, const double* mean, const double* weight,
                             std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(weight + i)));
  }
  double total = reduce_lanes(acc);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = x[i] - mean[i];
    total += (d * d) * weight[i];
  }
  return total;
}

std::uint64_t count_equal_bits_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                    std::size_t nbits) {
  const std::size_t full = nbits / 64;
  const std::size_t full4 = full & ~std::size_t{3};
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i ones = _mm256_set1_epi8(static_cast<char>(0xff));
  __m256i acc = _mm256_setzero_si256();
  for (std::size_t w = 0; w < full4; w += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w));
    const __m256i eq = _mm256_xor_si256(_mm256_xor_si256(va, vb), ones);
    const __m256i lo = _mm256_and_si256(eq, low);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(eq, 4), low);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (std::size_t w = full4; w < full; ++w) count += std::popcount(~(a[w] ^ b[w]));
  const std::size_t rest = nbits % 64;
  if (rest != 0) {
    const std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
    count += std::popcount(~(a[full] ^ b[full]) & mask);
  }
  return count;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static constexpr KernelTable table{dot_avx2, axpy_avx2, weighted_sq_dist_avx2,
                                     count_equal_bits_avx2};
  return table;
}

}  // namespace ecpf::simd
