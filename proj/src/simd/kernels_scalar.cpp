#include <cmath>

#include "simplexlab/simd/kernels.hpp"

namespace simplexlab::simd::detail {

namespace {

void accumulate(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void accumulate_scaled(double* dst, const double* src, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += c * src[i];
}

void accumulate_product(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a[i] * b[i];
}

void multiply(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void max_abs_scaled(double* dst, const double* src, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(c * src[i]);
    if (v > dst[i]) dst[i] = v;
  }
}

double sum_squares(const double* a, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, accumulate, accumulate_scaled, accumulate_product,
                             multiply,    max_abs_scaled, sum_squares,   dot};
  return t;
}

}  // namespace simplexlab::simd::detail
