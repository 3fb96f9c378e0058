#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace fdlab::par {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? (int)hw : 1;
}

/// Runs fn(begin, end) on contiguous chunks of [0, n) across `threads` workers.
inline void parallel_chunks(std::int64_t n, int threads,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
    threads = std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(n, 1));
    if (threads <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& th : pool) th.join();
}

/// Runs fn(i) for i in [0, n) on a worker pool pulling indices from a shared
/// queue (for coarse-grained independent jobs like parameter sweeps).
inline void parallel_jobs(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn) {
    threads = std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(n, 1));
    if (threads <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace fdlab::par
