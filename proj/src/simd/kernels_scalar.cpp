#include "rarekit/simd.hpp"

namespace rarekit::simd::scalar {

namespace {

// Lane layout mirrors one 256-bit register of doubles.
template <typename Term>
double reduce4(std::size_t n, Term term) noexcept {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 = l0 + term(i);
    l1 = l1 + term(i + 1);
    l2 = l2 + term(i + 2);
    l3 = l3 + term(i + 3);
  }
  double acc = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) acc = acc + term(i);
  return acc;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) noexcept {
  return reduce4(n, [=](std::size_t i) { return a[i] * b[i]; });
}

double squared_distance(const double* a, const double* b, std::size_t n) noexcept {
  return reduce4(n, [=](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

double scaled_squared_distance(const double* a, const double* b, const double* s,
                               std::size_t n) noexcept {
  return reduce4(n, [=](std::size_t i) {
    const double d = (a[i] - b[i]) * s[i];
    return d * d;
  });
}

}  // namespace rarekit::simd::scalar
