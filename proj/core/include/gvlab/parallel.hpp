#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace gvlab {

namespace detail {
inline std::atomic<int> g_thread_count{0};
}

/// Global worker count for parallel loops (0 = hardware concurrency).
inline void set_thread_count(int n) { detail::g_thread_count.store(n); }

inline int thread_count() {
    const int n = detail::g_thread_count.load();
    if (n > 0) return n;
    const unsigned h = std::thread::hardware_concurrency();
    return h > 0 ? static_cast<int>(h) : 1;
}

/// Runs fn(begin, end) over fixed-size blocks of [0, n). Blocks are handed to
/// workers dynamically but block boundaries do not depend on the worker
/// count, so per-block results can be combined in block order for
/// reproducible reductions.
template <typename Fn>
void parallel_blocks(std::size_t n, std::size_t block, Fn&& fn) {
    if (n == 0) return;
    const std::size_t nblocks = (n + block - 1) / block;
    int workers = thread_count();
    if (workers <= 1 || nblocks == 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            fn(b, b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            fn(b, b * block, std::min(n, (b + 1) * block));
        }
    };
    std::vector<std::thread> pool;
    const int k = std::min<int>(workers, static_cast<int>(nblocks));
    pool.reserve(static_cast<std::size_t>(k) - 1);
    for (int i = 1; i < k; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

/// Deterministic max-reduction over [0, n): fn(i) -> value; ties broken by
/// smaller index. Returns {best_index, best_value}; n must be > 0.
template <typename Fn>
std::pair<std::size_t, double> parallel_arg_max(std::size_t n, std::size_t block, Fn&& fn) {
    const std::size_t nblocks = (n + block - 1) / block;
    std::vector<std::pair<std::size_t, double>> best(nblocks);
    parallel_blocks(n, block, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::size_t bi = lo;
        double bv = fn(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double v = fn(i);
            if (v > bv) { bv = v; bi = i; }
        }
        best[b] = {bi, bv};
    });
    auto out = best[0];
    for (std::size_t b = 1; b < nblocks; ++b)
        if (best[b].second > out.second) out = best[b];
    return out;
}

}  // namespace gvlab
