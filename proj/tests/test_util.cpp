#include <cmath>
#include <cstdlib>
#include <map>

#include "doctest.h"
#include "pxplore/rng.hpp"
#include "pxplore/simd.hpp"
#include "pxplore/text.hpp"

using namespace pxplore;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-10.0, 10.0);
  return v;
}

void check_equivalent(const simd::KernelTable& k) {
  Rng rng(5);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 33u, 256u, 1001u}) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    const double tol = 1e-12 * (1.0 + static_cast<double>(n) * 100.0);
    CHECK(std::abs(k.dot(a.data(), b.data(), n) - simd::scalar::dot(a.data(), b.data(), n)) <= tol);
    CHECK(std::abs(k.sum_squares(a.data(), n) - simd::scalar::sum_squares(a.data(), n)) <= tol);
    if (n > 0) CHECK(k.max(a.data(), n) == simd::scalar::max(a.data(), n));
    auto y1 = b, y2 = b;
    k.axpy(0.37, a.data(), y1.data(), n);
    simd::scalar::axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-12);
    for (std::size_t rows : {1u, 5u, 10u}) {
      const auto m = random_vec(rng, rows * n);
      std::vector<double> g1(rows), g2(rows);
      k.gemv(m.data(), rows, n, a.data(), g1.data());
      simd::scalar::gemv(m.data(), rows, n, a.data(), g2.data());
      for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(g1[r] - g2[r]) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("vector kernels agree with scalar reference") {
  for (auto isa : {simd::Isa::kScalar, simd::Isa::kAvx2, simd::Isa::kNeon}) {
    const simd::KernelTable* k = simd::table_for(isa);
    if (k == nullptr) continue;
    INFO("isa " << simd::isa_name(isa));
    check_equivalent(*k);
  }
}

TEST_CASE("forcing the scalar table") {
  const simd::Isa before = simd::active().isa;
  CHECK(simd::force_isa(simd::Isa::kScalar));
  CHECK(simd::active().isa == simd::Isa::kScalar);
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(simd::dot(a, b) == 32.0);
  CHECK(simd::force_isa(before));
}

TEST_CASE("max handles negative values and NaN-free input") {
  const std::vector<double> v{-5.0, -2.0, -9.0, -2.5, -7.0, -3.0, -11.0, -4.0, -1.5};
  CHECK(simd::max(v) == -1.5);
}

TEST_CASE("tokenize") {
  CHECK(tokenize("Hello, World! x2-y") == TokenList{"hello", "world", "x2", "y"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  --  ").empty());
}

TEST_CASE("jaccard") {
  CHECK(jaccard({}, {}) == 0.0);
  CHECK(jaccard({"a", "b"}, {"a", "b"}) == 1.0);
  CHECK(jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(Rng::derive({1, 2, 3}).next() == Rng::derive({1, 2, 3}).next());
  CHECK(Rng::derive({1, 2, 3}).next() != Rng::derive({1, 2, 4}).next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const auto k = r.uniform_int(-3, 3);
    CHECK((k >= -3 && k <= 3));
    CHECK(r.categorical({0.0, 1.0, 0.0}) == 1);
  }
  std::vector<int> v{1, 2, 3, 4, 5};
  r.shuffle(v);
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<int>{1, 2, 3, 4, 5});
}
