#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "ecpf/simd/kernels.hpp"

namespace ecpf::simd {

#if defined(ECPF_HAVE_AVX2)
const KernelTable& avx2_kernel_table() noexcept;
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(ECPF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

const KernelTable* table_for(Level level) noexcept {
  if (level == Level::avx2) return avx2_kernels();
  return &scalar_kernels();
}

Level initial_level() noexcept {
  const char* env = std::getenv("ECPF_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Level::scalar;
  return detected_level();
}

struct State {
  std::atomic<const KernelTable*> table{table_for(initial_level())};
};

State& state() noexcept {
  static State s;
  return s;
}

}  // namespace

std::string_view to_string(Level level) noexcept {
  return level == Level::avx2 ? "avx2" : "scalar";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(ECPF_HAVE_AVX2)
  return &avx2_kernel_table();
#else
  return nullptr;
#endif
}

bool is_supported(Level level) noexcept {
  if (level == Level::scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Level detected_level() noexcept { return is_supported(Level::avx2) ? Level::avx2 : Level::scalar; }

Level active_level() noexcept {
  return state().table.load(std::memory_order_relaxed) == &scalar_kernels() ? Level::scalar
                                                                           : Level::avx2;
}

void set_level(Level level) {
  if (!is_supported(level)) {
    throw std::invalid_argument("SIMD level '" + std::string(to_string(level)) +
                                "' not supported on this CPU");
  }
  state().table.store(table_for(level), std::memory_order_relaxed);
}

const KernelTable& active_kernels() noexcept {
  return *state().table.load(std::memory_order_relaxed);
}

}  // namespace ecpf::simd
