#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace seqlep {

/**
 * @brief Evaluate task(i) for i in [0, count) on up to `workers` threads.
 *
 * Results land at their own index, so any fold over the returned vector is
 * independent of the worker count and of completion order. The first
 * exception thrown by a task is rethrown on the calling thread.
 */
template <class Result, class Task>
std::vector<Result> run_indexed(std::size_t count, std::size_t workers, Task&& task) {
    std::vector<Result> results(count);
    const std::size_t threads = std::max<std::size_t>(1, std::min(workers, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            results[i] = task(i);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) {
                return;
            }
            try {
                results[i] = task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

/// Replications per block when a suite reduces per-block partial sums.
inline constexpr std::size_t kReplicationBlock = 256;

}  // namespace seqlep
