#ifndef IKNO_PARALLEL_HPP
#define IKNO_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace ikno {

// Worker-thread count: IKNO_THREADS env var, else hardware concurrency.
inline unsigned thread_count() {
    static const unsigned n = [] {
        if (const char* env = std::getenv("IKNO_THREADS")) {
            const long v = std::atol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? hc : 1u;
    }();
    return n;
}

// Runs body(i) for i in [0, n). Each index is computed by exactly one worker,
// so results are independent of the thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = thread_count();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ikno

#endif  // IKNO_PARALLEL_HPP
