#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace orbsafe {

inline unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Static range split. fn(begin, end) must write only to its own range, so the
// result is independent of the schedule.
inline void parallel_for(std::size_t n, int num_threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    unsigned threads = resolve_threads(num_threads);
    if (threads <= 1 || n < 2048) {
        fn(0, n);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t begin = t * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace orbsafe
