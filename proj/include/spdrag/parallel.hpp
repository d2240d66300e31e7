// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spdrag {

// Runs fn(i) for i in [0, count) on up to max_workers threads.
// The first exception thrown by any worker is rethrown on the caller
// after all workers have joined.
inline void parallel_for(std::size_t count, std::size_t max_workers,
                         const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (max_workers < 1) max_workers = 1;
    std::size_t workers = std::min(count, max_workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto body = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace spdrag
