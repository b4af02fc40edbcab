#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace tevr {

inline unsigned default_thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Static block partition; fn(begin, end) per worker. Deterministic merges are
// the caller's responsibility (results indexed by position, not arrival).
template <class F>
void parallel_for(size_t n, F&& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    threads = (unsigned)std::min<size_t>(threads, n);
    if (threads <= 1) {
        fn((size_t)0, n);
        return;
    }
    std::vector<std::thread> pool;
    size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        size_t b = (size_t)t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

} // namespace tevr
