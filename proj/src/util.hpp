#pragma once

// Internal helpers.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hopfflow::detail {

inline int configured_threads() {
    static const int n = [] {
        if (const char* env = std::getenv("HOPFFLOW_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return 1;
    }();
    return n;
}

// Static partition over [0, count); deterministic as long as iterations write
// disjoint locations.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int threads = configured_threads();
    if (threads <= 1 || count < 256) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hopfflow::detail
