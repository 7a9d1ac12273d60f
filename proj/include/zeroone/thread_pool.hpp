#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace zeroone {

// Fixed-size worker pool for independent seeded work units (ensemble votes,
// matrix cells). Tasks must not depend on execution order; results go into
// caller-owned slots so output layout is deterministic regardless of
// scheduling.
class ThreadPool {
  public:
    explicit ThreadPool(std::size_t workers) {
        if (workers == 0) workers = 1;
        for (std::size_t i = 0; i < workers; ++i)
            threads_.emplace_back([this] { run(); });
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            done_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void submit(std::function<void()> task) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            tasks_.push(std::move(task));
            ++pending_;
        }
        cv_.notify_one();
    }

    void wait_all() {
        std::unique_lock<std::mutex> lock(mu_);
        idle_cv_.wait(lock, [this] { return pending_ == 0; });
    }

  private:
    void run() {
        for (;;) {
            std::function<void()> task;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [this] { return done_ || !tasks_.empty(); });
                if (tasks_.empty()) return;  // done_ and drained
                task = std::move(tasks_.front());
                tasks_.pop();
            }
            task();
            {
                std::lock_guard<std::mutex> lock(mu_);
                --pending_;
            }
            idle_cv_.notify_all();
        }
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable idle_cv_;
    std::queue<std::function<void()>> tasks_;
    std::size_t pending_ = 0;
    bool done_ = false;
    std::vector<std::thread> threads_;
};

// Runs tasks [0, count) with at most `workers` in flight and waits.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    ThreadPool pool(workers);
    for (std::size_t i = 0; i < count; ++i)
        pool.submit([fn, i] { fn(i); });
    pool.wait_all();
}

}  // namespace zeroone
