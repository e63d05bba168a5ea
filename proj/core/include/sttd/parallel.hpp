#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace sttd {

/// Caps the number of worker threads used by parallel_for. Values < 1 reset
/// to the number of available cores.
void set_thread_count(int n);
[[nodiscard]] int thread_count();

/// Resolves a thread count from an explicit request, then the STTD_THREADS
/// environment variable, then the core count.
[[nodiscard]] int resolve_thread_count(int requested);

namespace detail {
void run_parallel(std::size_t n, void (*body)(void*, std::size_t), void* ctx);
}

/// Runs fn(i) for i in [0, n). Iterations must write disjoint memory, so the
/// result never depends on the thread count. The first exception thrown by
/// any iteration is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  struct Ctx {
    Fn* fn;
    std::exception_ptr error;
    std::mutex mutex;
  } ctx{&fn, nullptr, {}};
  detail::run_parallel(
      n,
      [](void* raw, std::size_t i) {
        auto* c = static_cast<Ctx*>(raw);
        try {
          (*c->fn)(i);
        } catch (...) {
          std::lock_guard lock(c->mutex);
          if (!c->error) c->error = std::current_exception();
        }
      },
      &ctx);
  if (ctx.error) std::rethrow_exception(ctx.error);
}

}  // namespace sttd
