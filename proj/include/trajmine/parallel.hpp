#ifndef TRAJMINE_PARALLEL_HPP
#define TRAJMINE_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace trajmine {

/// Runs fn(lo, hi) over [0, n) split into contiguous ranges. Callers must
/// ensure the work done per index is independent of the partitioning, so
/// results do not depend on the worker count.
template <typename Fn>
void parallel_ranges(std::size_t n, int workers, Fn fn) {
    if (workers <= 1 || n < 2048) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> threads;
    threads.reserve(parts);
    const std::size_t per = (n + parts - 1) / parts;
    for (std::size_t t = 0; t < parts; ++t) {
        const std::size_t lo = t * per;
        const std::size_t hi = std::min(n, lo + per);
        if (lo >= hi) break;
        threads.emplace_back([=] { fn(lo, hi); });
    }
    for (auto& th : threads) th.join();
}

}  // namespace trajmine

#endif
