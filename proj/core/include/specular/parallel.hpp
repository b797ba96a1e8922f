#pragma once
/**
 * @file parallel.hpp
 * @brief Deterministic fork-join loop over an index range.
 *
 * Work is split into contiguous blocks; each index is processed exactly once
 * and callers write results into per-index slots, so output never depends on
 * the worker count.
 */

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace specular {

/// Worker count used when a caller passes 0: set_thread_count, else SPECULAR_THREADS, else hardware.
int default_thread_count();
/// Overrides the process-wide default (0 restores automatic selection).
void set_thread_count(int n);

template <class F>
void parallel_for(std::size_t n, F&& body, int threads = 0) {
    if (threads <= 0) threads = default_thread_count();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
}

}  // namespace specular
