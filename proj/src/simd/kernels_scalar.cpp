#include "intelliad/simd/kernels.hpp"

namespace intelliad::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double centered_dot_scalar(const double* x, const double* y, std::size_t n,
                           double mx, double my) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (x[i] - mx) * (y[i] - my);
  return acc;
}

double squared_distance_scalar(const double* x, const double* y,
                               std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void accumulate_scalar(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

constexpr KernelTable kScalar{
    Isa::Scalar,         sum_scalar,        dot_scalar, centered_dot_scalar,
    squared_distance_scalar, accumulate_scalar,
};

}  // namespace

const KernelTable& detail::scalar_table() noexcept { return kScalar; }

}  // namespace intelliad::simd
