// SPDX-License-Identifier: Apache-2.0
#include "muefix/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace muefix {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MUEFIX_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& fn) {
  threads = resolve_threads(threads);
  if (count == 0) return;
  const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), count);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t t = 0; t < workers; ++t) {
    const std::uint64_t begin = count * t / workers;
    const std::uint64_t end = count * (t + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace muefix
