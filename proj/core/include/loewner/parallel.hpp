#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace loewner {

inline unsigned resolve_workers(unsigned workers) {
    if (workers != 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs f(i) for i in [0, n).  Work items must be independent; results are
// typically written into a preallocated per-index slot so that the final
// reduction is order-independent regardless of the worker count.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                f(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace loewner
