#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace pcdefect {

/// Worker count used when the caller passes threads <= 0: the value of the
/// PCDEFECT_THREADS environment variable if set, otherwise
/// hardware_concurrency.
int default_thread_count();

/// Runs fn(i) for every i in [0, n), split into contiguous blocks across at
/// most `threads` workers. fn must write only to state owned by index i, so
/// results do not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 0) threads = default_thread_count();
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace pcdefect
