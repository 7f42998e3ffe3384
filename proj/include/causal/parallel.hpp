#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace causal::detail
{

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks, one
/// per thread; callers write into preallocated slots so results never depend on
/// scheduling. The first exception (lowest index) is rethrown on the caller.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)> &body)
{
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    threads = std::min(threads, count);

    std::mutex guard;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = count * t / threads;
        const std::size_t end = count * (t + 1) / threads;
        pool.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(guard);
                    if (i < failed_index) {
                        failed_index = i;
                        failure = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace causal::detail
