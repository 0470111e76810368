// Minimal deterministic work splitter for independent Monte Carlo trials.
#pragma once

#include <thread>
#include <vector>

namespace pcs {

// Runs fn(i) for every i in [0, n) using `threads` workers over contiguous
// index ranges. Each call must touch only state owned by index i; results are
// then identical for any thread count.
template <typename Fn>
void parallel_for(long long n, int threads, Fn&& fn) {
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    const long long workers = std::min<long long>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long long t = 0; t < workers; ++t) {
        const long long begin = n * t / workers;
        const long long end = n * (t + 1) / workers;
        pool.emplace_back([begin, end, &fn] {
            for (long long i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& worker : pool) worker.join();
}

}  // namespace pcs
