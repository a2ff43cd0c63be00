#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace regressia {

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// fn(begin, end, worker). Chunks are fixed by (count, jobs) alone, so callers
/// that reduce per-chunk results in chunk order get the same answer for any
/// scheduling. The first exception (by chunk index) is rethrown.
template <class Fn>
void parallel_chunks(std::uint64_t count, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count < 2) {
    fn(std::uint64_t{0}, count, 0u);
    return;
  }
  const std::uint64_t n = std::min<std::uint64_t>(jobs, count);
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  workers.reserve(n);
  for (std::uint64_t w = 0; w < n; ++w) {
    const std::uint64_t begin = count * w / n;
    const std::uint64_t end = count * (w + 1) / n;
    workers.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, static_cast<unsigned>(w));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace regressia
