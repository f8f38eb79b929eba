#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace permboot {

/// Worker count for embarrassingly parallel loops. 0 means one per hardware
/// thread. Results never depend on this value: every work item owns its seed
/// and its output slot.
struct Parallelism {
    unsigned threads = 1;

    [[nodiscard]] unsigned resolved() const {
        if (threads != 0) return threads;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/// Calls fn(i) for every i in [0, n). Work is handed out dynamically; the
/// first exception thrown by any item is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, Parallelism par, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(par.resolved(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace permboot
