#include "sttd/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace sttd {

namespace {

int hardware_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

std::atomic<int>& configured_threads() {
  static std::atomic<int> n{hardware_threads()};
  return n;
}

}  // namespace

void set_thread_count(int n) { configured_threads() = n < 1 ? hardware_threads() : n; }

int thread_count() { return configured_threads(); }

int resolve_thread_count(int requested) {
  if (requested >= 1) return requested;
  if (const char* env = std::getenv("STTD_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return hardware_threads();
}

namespace detail {

void run_parallel(std::size_t n, void (*body)(void*, std::size_t), void* ctx) {
  const int threads = thread_count();
  if (threads <= 1 || n <= 1 || omp_in_parallel()) {
    for (std::size_t i = 0; i < n; ++i) body(ctx, i);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) body(ctx, std::size_t(i));
}

}  // namespace detail

}  // namespace sttd
