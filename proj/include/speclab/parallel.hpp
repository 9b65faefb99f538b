#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace speclab {

template <typename T>
struct TaskResult {
    std::optional<T> value;
    std::string error; ///< non-empty when the task threw
};

/// Runs fn(0) .. fn(count - 1) on `workers` threads. Results are stored by
/// index, so the output does not depend on the schedule. Exceptions are
/// captured per task.
template <typename T, typename Fn>
std::vector<TaskResult<T>> parallel_map(int count, int workers, Fn&& fn)
{
    std::vector<TaskResult<T>> results(static_cast<std::size_t>(std::max(count, 0)));
    std::atomic<int> next{0};
    auto drain = [&] {
        for (int i = next++; i < count; i = next++) {
            auto& slot = results[static_cast<std::size_t>(i)];
            try {
                slot.value = fn(i);
            } catch (const std::exception& e) {
                slot.error = e.what();
            }
        }
    };
    const int threads = std::clamp(workers, 1, std::max(count, 1));
    if (threads == 1) {
        drain();
        return results;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back(drain);
    }
    pool.clear();
    return results;
}

/// SPECLAB_WORKERS if set and positive, else `fallback`.
inline int default_workers(int fallback = 1)
{
    if (const char* env = std::getenv("SPECLAB_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w > 0) {
                return w;
            }
        } catch (const std::exception&) {
        }
    }
    return fallback;
}

} // namespace speclab
