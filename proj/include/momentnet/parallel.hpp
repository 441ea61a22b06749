#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace momentnet {

/// Worker count from MOMENTNET_JOBS, else hardware concurrency (at least 1).
unsigned default_jobs();

/// Runs body(i) for every i in [0, count) on up to `jobs` threads.
///
/// Indices are handed out in contiguous blocks; callers that need bit-stable
/// results write per-index outputs and reduce them afterwards in index order.
/// The first exception thrown by any body is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    const std::size_t block = (count + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        const std::size_t begin = t * block;
        const std::size_t end = std::min(count, begin + block);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace momentnet
