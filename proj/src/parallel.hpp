#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lncd::detail {

inline unsigned resolve_workers(unsigned requested, std::uint64_t trials) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(trials, 1)));
}

// Calls body(trial) for every trial in [0, trials). Trials are handed out in
// fixed-size chunks; body must write only to per-trial storage.
template <class Body>
void for_each_trial(std::uint64_t trials, unsigned workers, Body&& body) {
  workers = resolve_workers(workers, trials);
  if (workers <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) body(t);
    return;
  }
  constexpr std::uint64_t kChunk = 1024;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const std::uint64_t begin = next.fetch_add(kChunk);
          if (begin >= trials) return;
          const std::uint64_t end = std::min(trials, begin + kChunk);
          for (std::uint64_t t = begin; t < end; ++t) body(t);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(trials);
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lncd::detail
