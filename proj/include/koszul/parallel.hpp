#ifndef KOSZUL_PARALLEL_HPP
#define KOSZUL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace koszul {

/// Worker count: KOSZUL_THREADS if set to a positive integer, else the hardware count.
inline std::size_t thread_budget()
{
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("KOSZUL_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0)
                return std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
        } catch (...) {
        }
    }
    return hw;
}

/// Runs body(i) for i in [0, count). Results must be written to per-index slots.
template <class Body>
void parallel_for(std::size_t count, Body body)
{
    const std::size_t workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace koszul

#endif
