#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace superres {

/// Worker count to use for a request of `requested` (0 means all cores).
inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end) -> T over contiguous chunks of [0, n) on up to
/// `workers` threads and returns the partial results in chunk order.
/// Exceptions from a chunk are rethrown on the calling thread.
template <typename T, typename Fn>
std::vector<T> parallel_chunks(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(resolve_workers(workers), n == 0 ? 1 : n));
  std::vector<T> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    try {
      parts[w] = fn(begin, end);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return parts;
}

}  // namespace superres
