#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace rgs {

// Applies fn(i) for i in [0, n) over statically partitioned chunks. Output
// locations written by distinct indices must be disjoint; the static split
// keeps results independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw == 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const std::size_t chunk = (n + hw - 1) / hw;
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i)
                fn(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace rgs
