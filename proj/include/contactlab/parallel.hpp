// Chunked parallel-for over an index range.  Thread count honours the
// CONTACTLAB_THREADS environment variable; reductions that need determinism
// should write per-index results into preallocated storage (or reduce with
// order-independent operations like min/max) rather than share accumulators.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace contactlab {

inline int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("CONTACTLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

// Calls body(begin, end) on disjoint chunks covering [0, n), possibly from
// several threads.  body must be safe to run concurrently on disjoint chunks.
template <class Body>
void parallel_chunks(std::size_t n, Body&& body) {
    const int threads = std::min<std::size_t>(max_threads(), n == 0 ? 1 : n);
    if (threads <= 1 || n < 2) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace contactlab
