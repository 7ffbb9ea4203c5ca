#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace itoquad {

/// Default worker count: $ITOQUAD_THREADS if set and positive, else the
/// hardware concurrency (at least 1).
inline std::size_t default_threads() {
    if (const char* env = std::getenv("ITOQUAD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Evaluates task(j) for j in [0, count) on `threads` workers and returns the
/// results indexed by j. Replicates are split into contiguous blocks; the
/// output order never depends on scheduling. A throwing task aborts the run
/// with a replicate_error naming the smallest failing index.
template <class Task>
auto run_parallel(std::size_t count, std::size_t threads, Task&& task) {
    using result_type = decltype(task(std::size_t{}));
    if (threads == 0) throw config_error("thread count must be at least 1");
    std::vector<result_type> out(count);
    const std::size_t workers = std::min(threads, std::max<std::size_t>(count, 1));

    std::mutex fail_mutex;
    std::size_t fail_index = std::numeric_limits<std::size_t>::max();
    std::string fail_what;

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            try {
                out[j] = task(j);
            } catch (const std::exception& e) {
                std::lock_guard lock(fail_mutex);
                if (j < fail_index) {
                    fail_index = j;
                    fail_what = e.what();
                }
                return;
            } catch (...) {
                std::lock_guard lock(fail_mutex);
                if (j < fail_index) {
                    fail_index = j;
                    fail_what = "unknown exception";
                }
                return;
            }
        }
    };

    if (workers <= 1) {
        work(0, count);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t block = count / workers;
        const std::size_t extra = count % workers;
        std::size_t begin = 0;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t end = begin + block + (w < extra ? 1 : 0);
            pool.emplace_back(work, begin, end);
            begin = end;
        }
    }

    if (fail_index != std::numeric_limits<std::size_t>::max()) throw replicate_error(fail_index, fail_what);
    return out;
}

}  // namespace itoquad
