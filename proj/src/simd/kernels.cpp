#include <atomic>
#include <cstdlib>

#include "kernels_impl.hpp"

namespace cloiseg::simd {

namespace {

constexpr KernelTable kScalar{SimdLevel::scalar, "scalar",
                              &detail::radius_select_scalar,
                              &detail::farthest_update_scalar};

#if defined(CLOISEG_HAVE_AVX2)
constexpr KernelTable kAvx2{SimdLevel::avx2, "avx2", &detail::radius_select_avx2,
                            &detail::farthest_update_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") != 0;
}
#endif

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("CLOI_SEG_SIMD")) {
    if (auto level = parse_level(env); level == SimdLevel::scalar) return &kScalar;
  }
  if (const auto* avx2 = avx2_kernels()) return avx2;
  return &kScalar;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_choice()};
  return slot;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(CLOISEG_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  return *active_slot().load(std::memory_order_acquire);
}

void set_active_level(SimdLevel level) {
  const KernelTable* table = &kScalar;
  if (level == SimdLevel::avx2 && avx2_kernels() != nullptr) table = avx2_kernels();
  active_slot().store(table, std::memory_order_release);
}

std::optional<SimdLevel> parse_level(std::string_view name) {
  if (name == "scalar") return SimdLevel::scalar;
  if (name == "avx2") return SimdLevel::avx2;
  return std::nullopt;
}

}  // namespace cloiseg::simd
