#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace phaselearn {

/// Number of worker threads used by parallel regions (1 = fully sequential).
int num_threads();

/// Sets the global worker count. Takes effect at the next parallel region.
void set_num_threads(int threads);

namespace detail {

inline std::atomic<int>& thread_count_flag() {
    static std::atomic<int> count{1};
    return count;
}

// True while the current thread is executing a pool task; nested parallel
// regions run inline so tasks never deadlock waiting on their own pool.
inline bool& inside_task() {
    thread_local bool flag = false;
    return flag;
}

// Persistent pool of (num_threads - 1) workers plus the calling thread.
// Tasks are claimed with an atomic counter; completion is signalled once
// the last task finishes. Only one top-level region runs at a time.
class ThreadPool {
public:
    static ThreadPool& instance() {
        static ThreadPool pool;
        return pool;
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool() { shutdown(); }

    void run(std::size_t task_count, const std::function<void(std::size_t)>& task) {
        std::lock_guard<std::mutex> region(region_mutex_);
        ensure_workers(num_threads() - 1);
        {
            std::lock_guard<std::mutex> lk(mutex_);
            task_ = &task;
            task_count_ = task_count;
            next_task_.store(0, std::memory_order_relaxed);
            remaining_.store(task_count, std::memory_order_relaxed);
            ++generation_;
        }
        work_ready_.notify_all();
        participate();
        std::unique_lock<std::mutex> lk(mutex_);
        done_.wait(lk, [&] { return remaining_.load(std::memory_order_acquire) == 0; });
        task_ = nullptr;
    }

private:
    ThreadPool() = default;

    void ensure_workers(int wanted) {
        if (wanted < 0) wanted = 0;
        if (static_cast<int>(workers_.size()) == wanted) return;
        shutdown();
        stop_ = false;
        workers_.reserve(static_cast<std::size_t>(wanted));
        for (int i = 0; i < wanted; ++i) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }

    void shutdown() {
        {
            std::lock_guard<std::mutex> lk(mutex_);
            stop_ = true;
            ++generation_;
        }
        work_ready_.notify_all();
        for (auto& w : workers_) {
            if (w.joinable()) w.join();
        }
        workers_.clear();
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock<std::mutex> lk(mutex_);
                work_ready_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            participate();
        }
    }

    void participate() {
        const auto* task = task_;
        if (task == nullptr) return;
        inside_task() = true;
        for (;;) {
            const std::size_t idx = next_task_.fetch_add(1, std::memory_order_relaxed);
            if (idx >= task_count_) break;
            (*task)(idx);
            if (remaining_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
                std::lock_guard<std::mutex> lk(mutex_);
                done_.notify_all();
            }
        }
        inside_task() = false;
    }

    std::mutex region_mutex_;
    std::mutex mutex_;
    std::condition_variable work_ready_;
    std::condition_variable done_;
    std::vector<std::thread> workers_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t task_count_ = 0;
    std::atomic<std::size_t> next_task_{0};
    std::atomic<std::size_t> remaining_{0};
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

} // namespace detail

inline int num_threads() { return detail::thread_count_flag().load(std::memory_order_relaxed); }

inline void set_num_threads(int threads) {
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    detail::thread_count_flag().store(threads, std::memory_order_relaxed);
}

/// Runs task(0..count-1), possibly concurrently. Tasks must write disjoint
/// data. Nested calls and single-thread configurations execute inline.
template <class Task>
void parallel_tasks(std::size_t count, Task&& task) {
    if (count == 0) return;
    if (num_threads() <= 1 || detail::inside_task() || count == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    const std::function<void(std::size_t)> fn = std::ref(task);
    detail::ThreadPool::instance().run(count, fn);
}

/// Fixed chunk grid for reductions: the grid depends only on the length, so
/// per-chunk partials combined in chunk order give the same result for every
/// worker count.
inline constexpr std::size_t kReductionChunks = 64;

inline std::size_t reduction_chunk_count(std::size_t length) {
    return length < kReductionChunks ? length : kReductionChunks;
}

/// Sums partial(begin, end) over the fixed chunk grid, in chunk order.
template <class T, class Partial>
T parallel_reduce(std::size_t length, Partial&& partial) {
    if (length == 0) return T{};
    const std::size_t chunks = reduction_chunk_count(length);
    std::vector<T> parts(chunks);
    parallel_tasks(chunks, [&](std::size_t c) {
        const std::size_t begin = length * c / chunks;
        const std::size_t end = length * (c + 1) / chunks;
        parts[c] = partial(begin, end);
    });
    T total{};
    for (const T& p : parts) total += p;
    return total;
}

} // namespace phaselearn
