// SPDX-License-Identifier: Apache-2.0
//
// Deterministic parallel helpers. parallel_for partitions an index range over
// a fixed number of threads; each item writes its own slot, and reductions
// run afterwards on a fixed pairwise tree, so results are bit-identical for
// any thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace randsense {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> value{0}; // 0 = hardware concurrency
    return value;
}
} // namespace detail

inline void set_max_threads(unsigned n) { detail::thread_setting().store(n); }

inline unsigned max_threads() {
    const unsigned v = detail::thread_setting().load();
    if (v != 0) return v;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs body(i) for i in [0, n). Exceptions are captured and the first one
// rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers =
        std::min<std::size_t>(max_threads(), n == 0 ? 1 : n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// Pairwise (fixed-tree) summation; independent of thread count by design.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

inline double pairwise_mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

} // namespace randsense
