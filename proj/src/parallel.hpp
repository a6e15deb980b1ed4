#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace benjamin::detail {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// body must not throw.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace benjamin::detail
