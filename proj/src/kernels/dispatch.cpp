#include <cstdlib>
#include <string_view>

#include "combo/kernels.hpp"

namespace combo::kernels {

#if defined(COMBO_HAVE_AVX2)
const KernelTable& avx2_kernel_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(COMBO_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("COMBO_KERNELS");
    if (forced && std::string_view(forced) == "scalar") return scalar_kernels();
    if (const KernelTable* v = avx2_kernels()) return *v;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace combo::kernels
