#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace bvf {

/// Worker cap for data-parallel loops: hardware concurrency, clamped by the
/// BVF_THREADS environment variable when set.
inline unsigned worker_count() {
    static const unsigned cached = [] {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("BVF_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
        }
        return hw;
    }();
    return cached;
}

/// Runs fn(i) for every i in [0, n), split across worker threads.
/// Each index is processed exactly once; fn must only write state owned by
/// index i, so results do not depend on the thread count. The first exception
/// thrown by fn (lowest starting chunk wins) is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t begin = next.fetch_add(chunk);
                    if (begin >= n) break;
                    const std::size_t end = std::min(n, begin + chunk);
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace bvf
