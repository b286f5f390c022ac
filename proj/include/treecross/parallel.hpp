#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "treecross/rng.hpp"

namespace treecross {

/// Splits `total` work items into `threads` contiguous shares. Worker k gets
/// its own Rng seeded with derive_seed(seed, k) and calls
/// work(rng, count, k) -> Result. Results come back in worker order, so the
/// merged output depends only on (seed, threads).
template <class Result, class Work>
std::vector<Result> run_workers(unsigned threads, std::uint64_t seed, std::uint64_t total,
                                Work work) {
  if (threads == 0) threads = 1;
  std::vector<Result> results(threads);
  std::vector<std::exception_ptr> failures(threads);

  auto body = [&](unsigned k) {
    try {
      const std::uint64_t begin = total * k / threads;
      const std::uint64_t end = total * (k + 1) / threads;
      Rng rng = Rng::for_worker(seed, k);
      results[k] = work(rng, end - begin, k);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };

  if (threads == 1) {
    body(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(body, k);
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  return results;
}

}  // namespace treecross
