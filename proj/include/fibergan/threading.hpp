// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_THREADING_HPP
#define FIBERGAN_THREADING_HPP

#include <cstddef>
#include <functional>

namespace fibergan {

// Worker cap from FIBERGAN_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

// Scoped hard cap on workers; benchmarks pin to one to avoid contention
// noise. Results never depend on the cap, only timings do.
class WorkerCapOverride {
 public:
  explicit WorkerCapOverride(std::size_t cap);
  ~WorkerCapOverride();
  WorkerCapOverride(const WorkerCapOverride&) = delete;
  WorkerCapOverride& operator=(const WorkerCapOverride&) = delete;

 private:
  std::size_t previous_;
};

// Runs fn(chunk_begin, chunk_len, chunk_index) over [0, count) in fixed
// chunks of chunk_size. Chunk boundaries do not depend on the worker count,
// so any reduction done in chunk-index order is bit-reproducible whether the
// chunks ran on one thread or many. fn must only write chunk-local state.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace fibergan

#endif
