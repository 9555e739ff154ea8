#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace screenopt {

/// Fixed-size worker pool for data-parallel loops.
///
/// Work is split into contiguous chunks whose boundaries depend only on the
/// problem size, never on the worker count, so per-index results and any
/// reduction done by the caller in index order are identical for every
/// pool size. Calls made from inside a worker run inline.
class Executor {
 public:
  explicit Executor(std::size_t workers = 1);
  ~Executor();

  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  std::size_t workers() const noexcept { return workers_; }

  /// Calls body(begin, end) over [0, n) in chunks of at most `grain`
  /// indices. Blocks until every chunk has finished. If chunks throw, the
  /// exception from the lowest chunk is rethrown.
  void for_chunks(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

  /// Calls body(i) for every i in [0, n), one task per index.
  void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

  /// Shared single-threaded executor.
  static Executor& serial();

 private:
  void worker_loop();

  std::size_t workers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
};

}  // namespace screenopt
