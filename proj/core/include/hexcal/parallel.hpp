#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace hexcal {

// Runs fn(i) for i in [0, n) on up to `threads` workers, each writing only its
// own index's output slot, so results are identical for any thread count.
// On failure the exception with the smallest index is rethrown (each worker
// visits its stripe in increasing order), which keeps error reporting
// independent of the thread count too.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::size_t> fail_index(workers, std::numeric_limits<std::size_t>::max());
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    fail_index[w] = i;
                    errors[w] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::exception_ptr first;
    for (std::size_t w = 0; w < workers; ++w) {
        if (errors[w] && fail_index[w] < best) {
            best = fail_index[w];
            first = errors[w];
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace hexcal
