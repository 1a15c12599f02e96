#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pbc {

namespace detail {
inline std::atomic<unsigned>& thread_limit() {
    static std::atomic<unsigned> limit{0};
    return limit;
}
}  // namespace detail

/// Caps worker threads used by library calls. 0 means all hardware threads.
inline void set_max_threads(unsigned n) { detail::thread_limit() = n; }

inline unsigned max_threads() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned lim = detail::thread_limit();
    return lim == 0 ? hw : std::min(lim, hw);
}

/// Runs body(i) for i in [0, n). Iterations must write to disjoint outputs;
/// results are then independent of the thread count. The first exception
/// thrown by any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pbc
