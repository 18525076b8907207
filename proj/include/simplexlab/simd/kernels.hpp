#pragma once

// Contiguous double-precision row kernels. The scalar table is the reference;
// the AVX2 table is picked at runtime when the CPU has AVX2+FMA.
// SIMPLEXLAB_ISA=scalar in the environment pins the scalar table.

#include <cstddef>
#include <optional>

namespace simplexlab::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // dst[i] += src[i]
  void (*accumulate)(double* dst, const double* src, std::size_t n);
  // dst[i] += c * src[i]
  void (*accumulate_scaled)(double* dst, const double* src, double c, std::size_t n);
  // dst[i] += a[i] * b[i]
  void (*accumulate_product)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = a[i] * b[i]
  void (*multiply)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = max(dst[i], |c * src[i]|)
  void (*max_abs_scaled)(double* dst, const double* src, double c, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

/// The table in use by the library.
const KernelTable& kernels();
/// A specific table; throws PreconditionError if the CPU lacks the ISA.
const KernelTable& kernels_for(Isa isa);
/// Overrides runtime selection (nullopt restores it). Not thread-safe against
/// concurrent kernels() callers.
void force_isa(std::optional<Isa> isa);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace simplexlab::simd
