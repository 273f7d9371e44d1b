#include "expmoment/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace expmoment {

namespace {
constexpr std::size_t kChunksPerLoop = 64;
}

std::size_t worker_thread_count() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("EXPMOMENT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      n = std::min(n, static_cast<std::size_t>(v));
  }
  return n;
}

std::size_t parallel_chunk_count(std::size_t n) {
  return std::min(n, kChunksPerLoop);
}

void parallel_chunks(
    std::size_t n,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t chunks = parallel_chunk_count(n);
  const std::size_t workers = std::min(worker_thread_count(), chunks);

  auto chunk_bounds = [&](std::size_t c) {
    // Spread the remainder over the leading chunks.
    const std::size_t base = n / chunks;
    const std::size_t extra = n % chunks;
    const std::size_t begin = c * base + std::min(c, extra);
    const std::size_t len = base + (c < extra ? 1 : 0);
    return std::pair<std::size_t, std::size_t>(begin, begin + len);
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      const auto [b, e] = chunk_bounds(c);
      fn(c, b, e);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const auto [b, e] = chunk_bounds(c);
      fn(c, b, e);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace expmoment
