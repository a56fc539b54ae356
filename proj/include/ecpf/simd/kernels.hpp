#pragma once

// Data-parallel inner loops used by the learners and the similarity matrix.
//
// Every kernel has a scalar reference and, on x86-64, an AVX2 variant picked
// at runtime. Floating-point reductions use four interleaved partial sums
// combined as (s0 + s1) + (s2 + s3), followed by the tail in order, in both
// variants; with contraction disabled the two produce bitwise-identical
// results, so switching levels never changes a run.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ecpf::simd {

enum class Level { scalar, avx2 };

std::string_view to_string(Level level) noexcept;
bool is_supported(Level level) noexcept;
// Best level supported by this CPU and build. ECPF_SIMD=scalar in the
// environment forces the scalar path.
Level detected_level() noexcept;
Level active_level() noexcept;
// Throws std::invalid_argument when the level is not supported.
void set_level(Level level);

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*weighted_sq_dist)(const double* x, const double* mean, const double* weight,
                             std::size_t n);
  std::uint64_t (*count_equal_bits)(const std::uint64_t* a, const std::uint64_t* b,
                                    std::size_t nbits);
};

const KernelTable& scalar_kernels() noexcept;
// Null when the build has no AVX2 variant.
const KernelTable* avx2_kernels() noexcept;
const KernelTable& active_kernels() noexcept;

// Σ a[i]·b[i]
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

// y[i] += alpha·x[i]
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

// Σ (x[i] − mean[i])²·weight[i]; with weight = 1/σ² this is the Gaussian
// Mahalanobis term of a diagonal-covariance log-likelihood.
inline double weighted_sq_dist(std::span<const double> x, std::span<const double> mean,
                               std::span<const double> weight) {
  return active_kernels().weighted_sq_dist(x.data(), mean.data(), weight.data(), x.size());
}

// Number of the first nbits bit positions at which a and b agree.
inline std::uint64_t count_equal_bits(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b, std::size_t nbits) {
  return active_kernels().count_equal_bits(a.data(), b.data(), nbits);
}

}  // namespace ecpf::simd
