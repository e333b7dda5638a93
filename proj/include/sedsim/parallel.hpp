#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sedsim {

// Fixed block size for Monte-Carlo reductions. Block boundaries depend only on
// the trial count, which is what makes results independent of worker count.
inline constexpr std::size_t kTrialBlock = 4096;

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(begin, end) for every block of [0, count) and returns the
// per-block results in block order. Workers pull blocks from a shared counter.
template <typename Result, typename Fn>
std::vector<Result> map_blocks(std::size_t count, unsigned workers, Fn&& fn) {
  const std::size_t blocks = (count + kTrialBlock - 1) / kTrialBlock;
  std::vector<Result> results(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      for (std::size_t b = next++; b < blocks; b = next++) {
        const std::size_t begin = b * kTrialBlock;
        results[b] = fn(begin, std::min(count, begin + kTrialBlock));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const unsigned n = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(blocks, 1)));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace sedsim
