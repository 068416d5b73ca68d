#pragma once

// Inner-loop kernels shared by Gram construction, LAGO scoring and the
// nearest-neighbour search.
//
// Every variant accumulates in four interleaved lanes (lane k sums elements
// i with i % 4 == k over the full blocks), reduces them as
// (l0 + l1) + (l2 + l3) and then adds the tail sequentially. No fused
// multiply-add is used anywhere, so the scalar reference and the vector
// variants return bitwise-identical results and outputs do not depend on
// which ISA was picked at runtime.

#include <span>
#include <string_view>

namespace rarekit::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

bool isa_supported(Isa isa) noexcept;
Isa best_supported_isa() noexcept;

// Selected once at startup: the best supported ISA, unless RAREKIT_SIMD
// names another supported one ("scalar", "avx2", "neon").
Isa active_isa() noexcept;
// Throws rarekit::Error when the ISA is not supported on this CPU.
void force_isa(Isa isa);

// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);
// sum_i (a[i] - b[i])^2
double squared_distance(std::span<const double> a, std::span<const double> b);
// sum_i ((a[i] - b[i]) * scale[i])^2
double scaled_squared_distance(std::span<const double> a, std::span<const double> b,
                               std::span<const double> scale);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
double scaled_squared_distance(const double* a, const double* b, const double* s,
                               std::size_t n) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
double scaled_squared_distance(const double* a, const double* b, const double* s,
                               std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
double scaled_squared_distance(const double* a, const double* b, const double* s,
                               std::size_t n) noexcept;
}  // namespace neon
#endif

}  // namespace rarekit::simd
