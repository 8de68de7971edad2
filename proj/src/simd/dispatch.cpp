#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

#include "pxplore/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PXPLORE_SIMD_X86 1
#else
#define PXPLORE_SIMD_X86 0
#endif

namespace pxplore::simd {

#if PXPLORE_SIMD_X86 && defined(PXPLORE_HAVE_AVX2)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
double sum_squares(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void gemv(const double*, std::size_t, std::size_t, const double*, double*);
double max(const double*, std::size_t);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double*, const double*, std::size_t);
double sum_squares(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void gemv(const double*, std::size_t, std::size_t, const double*, double*);
double max(const double*, std::size_t);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, scalar::dot, scalar::sum_squares,
                                   scalar::axpy, scalar::gemv, scalar::max};

#if PXPLORE_SIMD_X86 && defined(PXPLORE_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, avx2::dot, avx2::sum_squares,
                                 avx2::axpy, avx2::gemv, avx2::max};

bool host_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(__aarch64__)
constexpr KernelTable kNeonTable{Isa::kNeon, neon::dot, neon::sum_squares,
                                 neon::axpy, neon::gemv, neon::max};
#endif

const KernelTable* detect() {
  if (const char* env = std::getenv("PXPLORE_SIMD")) {
    if (std::string(env) == "scalar") return &kScalarTable;
  }
#if PXPLORE_SIMD_X86 && defined(PXPLORE_HAVE_AVX2)
  if (host_has_avx2()) return &kAvx2Table;
#endif
#if defined(__aarch64__)
  return &kNeonTable;
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return &kScalarTable;
    case Isa::kAvx2:
#if PXPLORE_SIMD_X86 && defined(PXPLORE_HAVE_AVX2)
      return host_has_avx2() ? &kAvx2Table : nullptr;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const KernelTable* detected = detect();
    const KernelTable* expected = nullptr;
    g_active.compare_exchange_strong(expected, detected, std::memory_order_acq_rel);
    t = g_active.load(std::memory_order_acquire);
  }
  return *t;
}

bool force_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) {
  return active().sum_squares(a.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> m, std::size_t cols, std::span<const double> x,
          std::span<double> y) {
  assert(cols == x.size() && m.size() == y.size() * cols);
  active().gemv(m.data(), y.size(), cols, x.data(), y.data());
}

double max(std::span<const double> a) { return active().max(a.data(), a.size()); }

}  // namespace pxplore::simd
