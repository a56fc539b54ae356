#include <bit>

#include "ecpf/simd/kernels.hpp"

namespace ecpf::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) s[j] += a[i + j] * b[i + j];
  }
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = n4; i < n; ++i) total += a[i] * b[i];
  return total;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_sq_dist_scalar(const double* x, const double* mean, const double* weight,
                               std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double d = x[i + j] - mean[i + j];
      s[j] += (d * d) * weight[i + j];
    }
  }
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = n4; i < n; ++i) {
    const double d = x[i] - mean[i];
    total += (d * d) * weight[i];
  }
  return total;
}

std::uint64_t count_equal_bits_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                      std::size_t nbits) {
  const std::size_t full = nbits / 64;
  std::uint64_t count = 0;
  for (std::size_t w = 0; w < full; ++w) count += std::popcount(~(a[w] ^ b[w]));
  const std::size_t rest = nbits % 64;
  if (rest != 0) {
    const std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
    count += std::popcount(~(a[full] ^ b[full]) & mask);
  }
  return count;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static constexpr KernelTable table{dot_scalar, axpy_scalar, weighted_sq_dist_scalar,
                                     count_equal_bits_scalar};
  return table;
}

}  // namespace ecpf::simd
