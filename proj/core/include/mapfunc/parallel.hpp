#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mapfunc {

//! Requested count if positive, else MAPFUNC_THREADS, else 1.
int resolve_threads(int requested) noexcept;

//---------------------------------------------------------------------------//
/*!
 * \brief Run f(i) for i in [0, n) on a static partition of worker threads.
 *
 * Each index writes only its own result slot, so output does not depend on
 * the thread count. The first exception is rethrown after all workers join.
 */
template <class F>
void parallel_for(std::size_t n, int threads, F&& f)
{
    std::size_t const t = threads < 1 ? 1 : static_cast<std::size_t>(threads);
    if (t == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t w = 0; w < t; ++w) {
        std::size_t const begin = n * w / t;
        std::size_t const end = n * (w + 1) / t;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace mapfunc
