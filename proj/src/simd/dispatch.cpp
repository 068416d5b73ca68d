#include <atomic>
#include <cstdlib>
#include <string>

#include "rarekit/error.hpp"
#include "rarekit/simd.hpp"

namespace rarekit::simd {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t) noexcept;
using ScaledFn = double (*)(const double*, const double*, const double*, std::size_t) noexcept;

struct Table {
  Isa isa;
  DotFn dot;
  DotFn sqdist;
  ScaledFn scaled;
};

constexpr Table kScalar{Isa::scalar, scalar::dot, scalar::squared_distance,
                        scalar::scaled_squared_distance};
#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{Isa::avx2, avx2::dot, avx2::squared_distance,
                      avx2::scaled_squared_distance};
#endif
#if defined(__aarch64__)
constexpr Table kNeon{Isa::neon, neon::dot, neon::squared_distance,
                      neon::scaled_squared_distance};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Table* initial_table() {
  Isa isa = best_supported_isa();
  if (const char* env = std::getenv("RAREKIT_SIMD")) {
    const std::string want(env);
    for (Isa candidate : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(candidate) && isa_supported(candidate)) isa = candidate;
    }
  }
  return table_for(isa);
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

void check_sizes(std::size_t a, std::size_t b) {
  require(a == b, ErrorCode::dimension_mismatch, "vector lengths differ");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_supported_isa() noexcept {
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed)->isa; }

void force_isa(Isa isa) {
  require(isa_supported(isa), ErrorCode::invalid_argument,
          "SIMD variant not supported on this CPU: " + std::string(isa_name(isa)));
  current().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return current().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return current().load(std::memory_order_relaxed)->sqdist(a.data(), b.data(), a.size());
}

double scaled_squared_distance(std::span<const double> a, std::span<const double> b,
                               std::span<const double> scale) {
  check_sizes(a.size(), b.size());
  check_sizes(a.size(), scale.size());
  return current().load(std::memory_order_relaxed)->scaled(a.data(), b.data(), scale.data(),
                                                          a.size());
}

}  // namespace rarekit::simd
