// SPDX-License-Identifier: Apache-2.0
//
// Tiny deterministic job pool: independent jobs run on a fixed number of
// worker threads, results land in input order for a single collector to
// consume. Jobs must not touch shared mutable state.

#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spintraj {

template <typename Result>
std::vector<Result> run_jobs(int n_jobs, int workers,
                             const std::function<Result(int)>& job) {
    std::vector<Result> results(static_cast<size_t>(std::max(0, n_jobs)));
    if (n_jobs <= 0) return results;
    workers = std::max(1, std::min(workers, n_jobs));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_jobs || failed.load()) return;
            try {
                results[static_cast<size_t>(i)] = job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace spintraj
