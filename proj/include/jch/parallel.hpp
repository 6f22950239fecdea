// parallel.hpp — index-based worker pool for grid sweeps
#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace jch {

// Runs fn(0..count-1) on `threads` workers (0 = hardware concurrency).
// Work items must be independent; results are deterministic when each item
// writes only to its own slot.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    unsigned n = threads > 0 ? unsigned(threads) : std::thread::hardware_concurrency();
    if (n < 1) n = 1;
    if (n == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace jch
