#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace obstrukt {

// Worker count: OBSTRUKT_THREADS if set and positive, else hardware concurrency.
inline int thread_count()
{
    if (const char* env = std::getenv("OBSTRUKT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

// Runs body(i) for i in [0, n) on a static block partition. Each index must
// write only its own result slot, which keeps output independent of the
// thread count. The first exception (lowest block) is rethrown.
template <typename F>
void parallel_for(std::size_t n, F&& body, int threads = thread_count())
{
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (t <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(t);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = n * w / t, hi = n * (w + 1) / t;
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Pairwise summation in a fixed tree, so the result does not depend on how the
// terms were produced.
template <typename T>
T pairwise_sum(std::span<const T> v)
{
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v)
{
    return pairwise_sum(std::span<const T>(v));
}

} // namespace obstrukt
