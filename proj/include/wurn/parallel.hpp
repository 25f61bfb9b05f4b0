#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wurn {

/// Number of workers to use when the caller passes 0: the WURN_THREADS
/// environment variable if set, otherwise the hardware concurrency.
inline unsigned default_thread_count()
{
    if (char const* env = std::getenv("WURN_THREADS"))
    {
        int const value = std::atoi(env);
        if (value > 0)
            return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Run `body(i)` for every i in [0, count) on up to `threads` workers.
 *
 * Indices are split into contiguous blocks, one per worker. The body must
 * only write to per-index storage; the result is then independent of the
 * number of workers. The first exception thrown by any worker is rethrown.
 */
template<class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
    if (threads == 0)
        threads = default_thread_count();
    std::size_t const workers = std::min<std::size_t>(threads, count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
    {
        std::size_t const begin = count * w / workers;
        std::size_t const end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> guard(failure_lock);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace wurn
