// SPDX-License-Identifier: Apache-2.0
#include "fibergan/threading.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fibergan {

namespace {
std::atomic<std::size_t> g_worker_cap{0};  // 0 = no override
}

WorkerCapOverride::WorkerCapOverride(std::size_t cap)
    : previous_(g_worker_cap.exchange(cap)) {}

WorkerCapOverride::~WorkerCapOverride() { g_worker_cap.store(previous_); }

std::size_t worker_count() {
  if (const std::size_t cap = g_worker_cap.load(); cap > 0) return cap;
  std::size_t n = 0;
  if (const char* env = std::getenv("FIBERGAN_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env) n = static_cast<std::size_t>(parsed);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = count;
  const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  const std::size_t workers = std::min(worker_count(), n_chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    fn(begin, std::min(chunk_size, count - begin), c);
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto drain = [&] {
    try {
      for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n_chunks);  // stop handing out work
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fibergan
