#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pmef {

/// Runs fn(row) for every row in [0, rows), split into contiguous chunks
/// across hardware threads. Each row is written by exactly one thread, so
/// results do not depend on the schedule.
template <typename Fn>
void parallel_rows(std::ptrdiff_t rows, Fn&& fn) {
    const auto hw = static_cast<std::ptrdiff_t>(std::max(1u, std::thread::hardware_concurrency()));
    const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(hw, std::max<std::ptrdiff_t>(1, rows / 16));
    if (workers <= 1) {
        for (std::ptrdiff_t y = 0; y < rows; ++y) fn(y);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::ptrdiff_t chunk = (rows + workers - 1) / workers;
    for (std::ptrdiff_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::ptrdiff_t end = std::min(rows, (w + 1) * chunk);
                for (std::ptrdiff_t y = w * chunk; y < end; ++y) fn(y);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace pmef
