// SPDX-License-Identifier: Apache-2.0
//
// Minimal fork-join helper. Work is cut into fixed-size chunks whose
// boundaries do not depend on the worker count; callers reduce per-chunk
// results in chunk order, so floating-point sums are identical for any
// number of threads.
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

namespace beamopt {

/// Worker count from BEAMOPT_THREADS, else hardware concurrency, else 1.
inline int default_worker_count()
{
    if (const char* env = std::getenv("BEAMOPT_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls fn(chunk, begin, end) for every chunk of [0, count). Chunks may run
/// in any order and on any thread. The first exception thrown by fn is
/// rethrown after all workers stop.
template <class Fn>
void for_each_chunk(std::size_t count, std::size_t chunk_size, int workers, Fn&& fn)
{
    if (count == 0) {
        return;
    }
    chunk_size = std::max<std::size_t>(chunk_size, 1);
    const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks || failed.load()) {
                return;
            }
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(count, begin + chunk_size);
            try {
                fn(c, begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };

    const std::size_t n_threads = std::min<std::size_t>(std::max(workers, 1), chunks);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads - 1);
        for (std::size_t t = 1; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace beamopt
