#pragma once
// Dense double-precision kernels used by the policy, value and embedding code.
//
// Every kernel has a portable scalar reference implementation. Vector variants
// (AVX2+FMA on x86-64, NEON on AArch64) are selected once at runtime from the
// host CPU; PXPLORE_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace pxplore::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[r] = sum_c m[r * cols + c] * x[c], row-major m
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols,
               const double* x, double* y);
  double (*max)(const double* a, std::size_t n);
};

// Kernels compiled into this binary for `isa`, or nullptr when unavailable.
const KernelTable* table_for(Isa isa);

// The table chosen for this process. Resolved on first call.
const KernelTable& active();

// Overrides runtime selection (tests and benchmarks). Returns false when the
// requested ISA is not usable on this host.
bool force_isa(Isa isa);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x,
          double* y);
double max(const double* a, std::size_t n);
}  // namespace scalar

// Span front-ends over the active table.
double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> m, std::size_t cols, std::span<const double> x,
          std::span<double> y);
double max(std::span<const double> a);

}  // namespace pxplore::simd
