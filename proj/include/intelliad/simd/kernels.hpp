#pragma once

// Reduction and distance kernels shared by the profiler, the regression and
// correlation code, and k-means. Each kernel has a scalar reference version
// and vectorized variants (AVX2+FMA on x86-64, NEON on AArch64). The variant
// is picked once at runtime from CPU features; INTELLIAD_ISA=scalar|avx2|neon
// overrides the choice.
//
// Vector variants reassociate sums, so results agree with the scalar
// reference to rounding, not bit-for-bit. Within one process the selected
// table never changes, so repeated runs are bitwise reproducible.

#include <cstddef>
#include <span>
#include <string_view>

namespace intelliad::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i (x_i - mx) * (y_i - my)
  double (*centered_dot)(const double* x, const double* y, std::size_t n,
                         double mx, double my);
  double (*squared_distance)(const double* x, const double* y, std::size_t n);
  // dst_i += src_i
  void (*accumulate)(double* dst, const double* src, std::size_t n);
};

bool isa_available(Isa isa) noexcept;

/// Table for a specific ISA. Requesting an unavailable ISA falls back to the
/// scalar table.
const KernelTable& kernels_for(Isa isa) noexcept;

/// Table selected for this process.
const KernelTable& active() noexcept;

/// Pin the active table (used by the equivalence tests and benchmarks).
/// Returns false and leaves the selection unchanged if the ISA is unavailable.
bool force_isa(Isa isa) noexcept;

// Convenience wrappers over the active table.

inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}

inline double mean(std::span<const double> x) {
  return x.empty() ? 0.0 : sum(x) / static_cast<double>(x.size());
}

// Callers guarantee x.size() == y.size().
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline double centered_dot(std::span<const double> x, std::span<const double> y,
                           double mx, double my) {
  return active().centered_dot(x.data(), y.data(), x.size(), mx, my);
}

inline double squared_distance(std::span<const double> x,
                               std::span<const double> y) {
  return active().squared_distance(x.data(), y.data(), x.size());
}

inline void accumulate(std::span<double> dst, std::span<const double> src) {
  active().accumulate(dst.data(), src.data(), dst.size());
}

namespace detail {
// Defined per translation unit; the AVX2/NEON getters return nullptr when the
// target was not compiled in.
const KernelTable& scalar_table() noexcept;
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace intelliad::simd
