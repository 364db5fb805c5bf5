#pragma once

#include <cstddef>
#include <future>
#include <vector>

namespace gearcheck {

// Runs fn(0..count-1), concurrently when `parallel` is set. Each task must
// write only to its own output slot. The first exception is rethrown after
// every task has finished.
template <typename Fn>
void parallel_for(std::size_t count, bool parallel, Fn&& fn) {
    if (!parallel || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::future<void>> tasks;
    tasks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        tasks.push_back(std::async(std::launch::async, [&fn, i] { fn(i); }));
    }
    std::exception_ptr first;
    for (auto& task : tasks) {
        try {
            task.get();
        } catch (...) {
            if (!first) {
                first = std::current_exception();
            }
        }
    }
    if (first) {
        std::rethrow_exception(first);
    }
}

} // namespace gearcheck
