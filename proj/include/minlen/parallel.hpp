#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace minlen {

/// Worker count from MINLEN_OSC_THREADS (0 or unset = hardware concurrency).
inline unsigned thread_count()
{
    unsigned requested = 0;
    if (const char* env = std::getenv("MINLEN_OSC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                requested = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            requested = 0;
        }
    }
    if (requested == 0)
        requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; the first exception is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t count, const Body& body, unsigned threads = thread_count())
{
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
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
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace minlen
