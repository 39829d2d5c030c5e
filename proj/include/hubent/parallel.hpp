#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hubent {

/// Worker count from HUBENT_WORKERS (0 or unset = hardware concurrency).
inline unsigned default_workers() {
  unsigned n = 0;
  if (const char* env = std::getenv("HUBENT_WORKERS")) n = static_cast<unsigned>(std::atoi(env));
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Calls body(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out in contiguous blocks; the first exception (lowest index wins
/// among those observed) is rethrown after all threads join.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, const Body& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers, end = count * (w + 1) / workers;
    threads.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hubent
