#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace barrenlab {

/// Runs fn(chunk_index, begin, end) over [0,n) split into fixed-size chunks.
/// Chunk boundaries depend only on (n, chunk); callers that store per-chunk
/// partial results and combine them in chunk order get bit-identical output
/// regardless of the worker count.
template <typename Fn>
void parallel_for_chunks(std::size_t n, std::size_t chunk, Fn&& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(hw, n_chunks));

    if (n_threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }

    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t c = t; c < n_chunks; c += n_threads)
                fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        });
    }
    for (auto& w : workers) w.join();
}

inline std::size_t chunk_count(std::size_t n, std::size_t chunk) {
    return chunk == 0 ? n : (n + chunk - 1) / chunk;
}

}  // namespace barrenlab
