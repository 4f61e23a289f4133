#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace slcurv {

/// Runs fn(i) for i in [0, count) over `workers` threads using fixed
/// contiguous chunks. Each index is visited exactly once and results must be
/// written to per-index slots, so outputs do not depend on the worker count.
/// If several indices throw, the exception from the smallest one is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn)
{
    const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(count, 1));
    if (w == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::vector<std::exception_ptr> errors(w);
    std::vector<std::size_t> error_index(w, count);
    std::vector<std::thread> pool;
    pool.reserve(w);
    const std::size_t chunk = (count + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(count, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                    error_index[t] = i;
                    return;
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (std::size_t t = 0; t < w; ++t) {
        if (errors[t]) {
            std::rethrow_exception(errors[t]);
        }
    }
}

}  // namespace slcurv
