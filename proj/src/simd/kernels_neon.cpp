#include "rarekit/simd.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

// Two float64x2 registers emulate the four-lane layout: lo holds lanes 0,1
// and hi holds lanes 2,3.
namespace rarekit::simd::neon {

namespace {

inline double finish(float64x2_t lo, float64x2_t hi) noexcept {
  const double l0 = vgetq_lane_f64(lo, 0), l1 = vgetq_lane_f64(lo, 1);
  const double l2 = vgetq_lane_f64(hi, 0), l3 = vgetq_lane_f64(hi, 1);
  return (l0 + l1) + (l2 + l3);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) noexcept {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double out = finish(lo, hi);
  for (; i < n; ++i) out = out + a[i] * b[i];
  return out;
}

double squared_distance(const double* a, const double* b, std::size_t n) noexcept {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    lo = vaddq_f64(lo, vmulq_f64(d0, d0));
    hi = vaddq_f64(hi, vmulq_f64(d1, d1));
  }
  double out = finish(lo, hi);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    out = out + d * d;
  }
  return out;
}

double scaled_squared_distance(const double* a, const double* b, const double* s,
                               std::size_t n) noexcept {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    d0 = vmulq_f64(d0, vld1q_f64(s + i));
    d1 = vmulq_f64(d1, vld1q_f64(s + i + 2));
    lo = vaddq_f64(lo, vmulq_f64(d0, d0));
    hi = vaddq_f64(hi, vmulq_f64(d1, d1));
  }
  double out = finish(lo, hi);
  for (; i < n; ++i) {
    const double d = (a[i] - b[i]) * s[i];
    out = out + d * d;
  }
  return out;
}

}  // namespace rarekit::simd::neon

#endif
