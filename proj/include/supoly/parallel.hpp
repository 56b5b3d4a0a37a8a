// parallel.hpp: trial-parallel map with results merged in trial order.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace supoly {

inline int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/**
 * results[t] = fn(t) for t in [0, trials), computed on `threads` workers.
 * Workers claim fixed-size chunks; output position depends only on t, so the
 * returned vector is independent of the thread count. The first exception
 * thrown by any worker is rethrown after all workers stop.
 */
template <class Fn>
auto parallel_trials(std::uint64_t trials, int threads, Fn&& fn) {
    using Result = decltype(fn(std::uint64_t{0}));
    // vector<bool> packs bits; concurrent writes to neighbours would race
    static_assert(!std::is_same_v<Result, bool>, "return an integer type instead of bool");
    std::vector<Result> results(trials);
    const int workers = static_cast<int>(std::clamp<std::uint64_t>(
        static_cast<std::uint64_t>(std::max(threads, 1)), 1, std::max<std::uint64_t>(trials, 1)));
    constexpr std::uint64_t kChunk = 64;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;

    auto work = [&] {
        try {
            for (;;) {
                if (failed.load(std::memory_order_relaxed)) return;
                const std::uint64_t begin = next.fetch_add(kChunk);
                if (begin >= trials) return;
                const std::uint64_t end = std::min(trials, begin + kChunk);
                for (std::uint64_t t = begin; t < end; ++t) results[t] = fn(t);
            }
        } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace supoly
