#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::cli {

/// Deterministic worker pool: item i is computed by fn(i) into slot i, so
/// the gathered order never depends on scheduling. The first exception is
/// rethrown after all workers join.
template <class R>
std::vector<R> parallel_map(int jobs, index_t n, const std::function<R(index_t)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    std::vector<R> out(static_cast<size_t>(n));
    if (jobs == 1 || n <= 1) {
        for (index_t i = 0; i < n; ++i) out[static_cast<size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<index_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&]() {
            while (true) {
                const index_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    out[static_cast<size_t>(i)] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

} // namespace dimred::cli
