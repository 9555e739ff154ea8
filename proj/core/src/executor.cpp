#include "screenopt/executor.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>

namespace screenopt {

namespace {
thread_local bool t_inside_worker = false;
}

Executor::Executor(std::size_t workers) : workers_(std::max<std::size_t>(1, workers)) {
  if (workers_ > 1) {
    threads_.reserve(workers_);
    for (std::size_t i = 0; i < workers_; ++i) threads_.emplace_back([this] { worker_loop(); });
  }
}

Executor::~Executor() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

Executor& Executor::serial() {
  static Executor instance(1);
  return instance;
}

void Executor::worker_loop() {
  t_inside_worker = true;
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    task();
  }
}

void Executor::for_chunks(std::size_t n, std::size_t grain,
                          const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  grain = std::max<std::size_t>(1, grain);
  const std::size_t chunks = (n + grain - 1) / grain;
  if (threads_.empty() || chunks == 1 || t_inside_worker) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * grain, std::min(n, (c + 1) * grain));
    return;
  }

  std::vector<std::exception_ptr> errors(chunks);
  std::mutex done_mutex;
  std::condition_variable done_cv;
  std::size_t remaining = chunks;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t c = 0; c < chunks; ++c) {
      queue_.emplace_back([&, c] {
        try {
          body(c * grain, std::min(n, (c + 1) * grain));
        } catch (...) {
          errors[c] = std::current_exception();
        }
        std::lock_guard done_lock(done_mutex);
        if (--remaining == 0) done_cv.notify_one();
      });
    }
  }
  wake_.notify_all();
  {
    std::unique_lock lock(done_mutex);
    done_cv.wait(lock, [&] { return remaining == 0; });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void Executor::for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  for_chunks(n, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace screenopt
