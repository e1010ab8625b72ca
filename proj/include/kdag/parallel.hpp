#ifndef KDAG_PARALLEL_HPP
#define KDAG_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace kdag {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

/// Runs fn(index) for every index in [0, count), statically partitioned
/// over `threads` workers. Results must be written to per-index slots so
/// the outcome is independent of the schedule.
template <typename Fn>
void parallel_for_index(uint64_t count, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count < 2) {
        for (uint64_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        const uint64_t lo = count * w / threads;
        const uint64_t hi = count * (w + 1) / threads;
        pool.emplace_back([lo, hi, &fn] {
            for (uint64_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace kdag

#endif // KDAG_PARALLEL_HPP
