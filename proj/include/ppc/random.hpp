#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace ppc {

using Rng = std::mt19937_64;

// Independent generator for substream `stream` of master seed `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

// Uniform on [0, 1) with 53 random bits; spelled out so streams do not depend
// on the standard library's distribution implementations.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Uniform integer in [0, n) by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
  std::uint64_t x = rng();
  while (x > limit) x = rng();
  return x % n;
}

inline constexpr std::uint64_t kTrialsPerBlock = 4096;

// Splits `trials` into fixed blocks of kTrialsPerBlock and evaluates
// body(rng, first_trial, count) for each block on a worker pool. Block b
// always draws from substream(seed, b), and results come back in block
// order, so the outcome does not depend on the number of threads.
template <class Result, class Body>
std::vector<Result> run_blocks(std::uint64_t trials, std::uint64_t seed, Body&& body, unsigned threads = 0) {
  const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<Result> results(static_cast<std::size_t>(blocks));
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(blocks, 1)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t b = next++; b < blocks; b = next++) {
        Rng rng = substream(seed, b);
        const std::uint64_t first = b * kTrialsPerBlock;
        results[static_cast<std::size_t>(b)] = body(rng, first, std::min(kTrialsPerBlock, trials - first));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace ppc
