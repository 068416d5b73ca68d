#include "rarekit/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define RAREKIT_AVX2 __attribute__((target("avx2")))

namespace rarekit::simd::avx2 {

namespace {

RAREKIT_AVX2 inline double finish(__m256d acc) noexcept {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

RAREKIT_AVX2 double dot(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, p);
  }
  double out = finish(acc);
  for (; i < n; ++i) out = out + a[i] * b[i];
  return out;
}

RAREKIT_AVX2 double squared_distance(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double out = finish(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    out = out + d * d;
  }
  return out;
}

RAREKIT_AVX2 double scaled_squared_distance(const double* a, const double* b, const double* s,
                                            std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    d = _mm256_mul_pd(d, _mm256_loadu_pd(s + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double out = finish(acc);
  for (; i < n; ++i) {
    const double d = (a[i] - b[i]) * s[i];
    out = out + d * d;
  }
  return out;
}

}  // namespace rarekit::simd::avx2

#endif
