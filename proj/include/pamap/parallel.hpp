#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace pamap {

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Static partition of [0,total) into contiguous chunks, one per worker.
// Results must be merged by chunk index by the caller, which keeps every
// reduction schedule-independent.
inline void parallel_chunks(std::size_t total, int threads,
                            const std::function<void(std::size_t chunk, std::size_t begin,
                                                     std::size_t end)>& body) {
    int nt = effective_threads(threads);
    if (total == 0) return;
    if (nt <= 1 || total < 2) {
        body(0, 0, total);
        return;
    }
    std::size_t nchunks = static_cast<std::size_t>(nt);
    if (nchunks > total) nchunks = total;
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    std::size_t base = total / nchunks, rem = total % nchunks, begin = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        std::size_t len = base + (c < rem ? 1 : 0);
        std::size_t end = begin + len;
        pool.emplace_back([&body, c, begin, end] { body(c, begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace pamap
