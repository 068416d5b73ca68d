#include <bit>
#include <cstdint>

#include "doctest.h"
#include "rarekit/simd.hpp"
#include "support.hpp"

using namespace rarekit;

namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

// Lane-ordered reference written independently of the library kernels.
double lane_sum(const std::vector<double>& terms) {
  double lanes[4] = {0, 0, 0, 0};
  const std::size_t full = terms.size() / 4 * 4;
  for (std::size_t i = 0; i < full; ++i) lanes[i % 4] += terms[i];
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = full; i < terms.size(); ++i) total += terms[i];
  return total;
}

}  // namespace

TEST_CASE("scalar kernels follow the documented lane order") {
  Rng rng(1);
  for (std::size_t n = 0; n <= 19; ++n) {
    const Matrix m = test::random_matrix(3, n, rng);
    const double* a = m.row(0).data();
    const double* b = m.row(1).data();
    const double* s = m.row(2).data();
    std::vector<double> dot_terms(n), dist_terms(n), scaled_terms(n);
    for (std::size_t i = 0; i < n; ++i) {
      dot_terms[i] = a[i] * b[i];
      const double diff = a[i] - b[i];
      dist_terms[i] = diff * diff;
      const double sd = diff * s[i];
      scaled_terms[i] = sd * sd;
    }
    CHECK(same_bits(simd::scalar::dot(a, b, n), lane_sum(dot_terms)));
    CHECK(same_bits(simd::scalar::squared_distance(a, b, n), lane_sum(dist_terms)));
    CHECK(same_bits(simd::scalar::scaled_squared_distance(a, b, s, n), lane_sum(scaled_terms)));
  }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 kernels are bitwise equal to scalar") {
  if (!simd::isa_supported(simd::Isa::avx2)) {
    MESSAGE("AVX2 not available on this CPU; skipped");
    return;
  }
  Rng rng(2);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix m = test::random_matrix(3, n, rng, 1e3);
      const double* a = m.row(0).data();
      const double* b = m.row(1).data();
      const double* s = m.row(2).data();
      REQUIRE(same_bits(simd::avx2::dot(a, b, n), simd::scalar::dot(a, b, n)));
      REQUIRE(same_bits(simd::avx2::squared_distance(a, b, n), simd::scalar::squared_distance(a, b, n)));
      REQUIRE(same_bits(simd::avx2::scaled_squared_distance(a, b, s, n),
                        simd::scalar::scaled_squared_distance(a, b, s, n)));
    }
  }
}
#endif

#if defined(__aarch64__)
TEST_CASE("neon kernels are bitwise equal to scalar") {
  Rng rng(3);
  for (std::size_t n = 0; n <= 67; ++n) {
    const Matrix m = test::random_matrix(3, n, rng, 1e3);
    const double* a = m.row(0).data();
    const double* b = m.row(1).data();
    const double* s = m.row(2).data();
    REQUIRE(same_bits(simd::neon::dot(a, b, n), simd::scalar::dot(a, b, n)));
    REQUIRE(same_bits(simd::neon::squared_distance(a, b, n), simd::scalar::squared_distance(a, b, n)));
    REQUIRE(same_bits(simd::neon::scaled_squared_distance(a, b, s, n),
                      simd::scalar::scaled_squared_distance(a, b, s, n)));
  }
}
#endif

TEST_CASE("dispatch") {
  CHECK(simd::isa_supported(simd::Isa::scalar));
  CHECK(simd::isa_supported(simd::best_supported_isa()));
  CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
  const simd::Isa before = simd::active_isa();
  const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  const double ref = simd::dot(a, b);
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  CHECK(simd::dot(a, b) == ref);
  simd::force_isa(before);
  CHECK_THROWS_AS(simd::dot(a, std::vector<double>{1}), Error);
#if defined(__x86_64__)
  CHECK_THROWS_AS(simd::force_isa(simd::Isa::neon), Error);
#endif
}
