#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace blowuplab {

/// Worker count: hardware concurrency, capped by BLOWUPLAB_THREADS.
inline unsigned thread_budget()
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 2;
    if (const char* env = std::getenv("BLOWUPLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0 && unsigned(v) < hw) hw = unsigned(v);
    }
    return hw;
}

/// Runs f(0..n-1) across the thread budget. Tasks must be independent;
/// results keyed by index stay deterministic regardless of schedule.
template <typename F>
void parallel_for(std::size_t n, F&& f)
{
    const unsigned T = std::min<std::size_t>(thread_budget(), n);
    if (T <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (unsigned w = 0; w < T; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace blowuplab
