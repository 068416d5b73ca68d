#include "rarekit/parallel.hpp"

#include <cstdlib>
#include <string>

namespace rarekit {

namespace {

unsigned initial_workers() {
  if (const char* env = std::getenv("RAREKIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned>& workers() {
  static std::atomic<unsigned> n{initial_workers()};
  return n;
}

}  // namespace

unsigned worker_count() noexcept { return workers().load(std::memory_order_relaxed); }

void set_worker_count(unsigned n) noexcept {
  workers().store(n == 0 ? 1 : n, std::memory_order_relaxed);
}

}  // namespace rarekit
