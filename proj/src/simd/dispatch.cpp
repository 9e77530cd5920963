#include <atomic>
#include <cstdlib>
#include <string>

#include "intelliad/simd/kernels.hpp"

namespace intelliad::simd {
namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_initial() noexcept {
  if (const char* env = std::getenv("INTELLIAD_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &detail::scalar_table();
    if (want == "avx2" && isa_available(Isa::Avx2)) return detail::avx2_table();
    if (want == "neon" && isa_available(Isa::Neon)) return detail::neon_table();
  }
  if (isa_available(Isa::Avx2)) return detail::avx2_table();
  if (isa_available(Isa::Neon)) return detail::neon_table();
  return &detail::scalar_table();
}

std::atomic<const KernelTable*>& selected() noexcept {
  static std::atomic<const KernelTable*> table{select_initial()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return detail::avx2_table() != nullptr && cpu_has_avx2_fma();
    // NEON is architecturally mandatory on AArch64.
    case Isa::Neon: return detail::neon_table() != nullptr;
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) noexcept {
  if (!isa_available(isa)) return detail::scalar_table();
  switch (isa) {
    case Isa::Avx2: return *detail::avx2_table();
    case Isa::Neon: return *detail::neon_table();
    case Isa::Scalar: break;
  }
  return detail::scalar_table();
}

const KernelTable& active() noexcept {
  return *selected().load(std::memory_order_acquire);
}

bool force_isa(Isa isa) noexcept {
  if (!isa_available(isa)) return false;
  selected().store(&kernels_for(isa), std::memory_order_release);
  return true;
}

}  // namespace intelliad::simd
