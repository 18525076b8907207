#include <atomic>
#include <cstdlib>
#include <string_view>

#include "simplexlab/error.hpp"
#include "simplexlab/simd/kernels.hpp"

namespace simplexlab::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  if (const char* env = std::getenv("SIMPLEXLAB_ISA"); env && std::string_view(env) == "scalar")
    return &detail::scalar_table();
  if (isa_supported(Isa::avx2)) return detail::avx2_table();
  return &detail::scalar_table();
}

std::atomic<const KernelTable*> forced{nullptr};

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = detail::avx2_table() != nullptr && cpu_has_avx2();
  return avx2;
}

const KernelTable& kernels_for(Isa isa) {
  require(isa_supported(isa), std::string("simd: ISA not available on this CPU: ") + isa_name(isa));
  return isa == Isa::avx2 ? *detail::avx2_table() : detail::scalar_table();
}

const KernelTable& kernels() {
  if (const auto* f = forced.load(std::memory_order_relaxed)) return *f;
  static const KernelTable* chosen = select_default();
  return *chosen;
}

void force_isa(std::optional<Isa> isa) {
  forced.store(isa ? &kernels_for(*isa) : nullptr, std::memory_order_relaxed);
}

}  // namespace simplexlab::simd
