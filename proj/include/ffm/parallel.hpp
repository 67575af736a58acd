#pragma once

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ffm {

/// Number of worker threads used by parallel loops. 0 means "hardware".
unsigned default_thread_count();
void set_default_thread_count(unsigned t);

/// Chunk layout for a range of `count` items. Chunk boundaries depend only on
/// `count`, never on the thread count, so per-chunk results can be merged in
/// chunk order and the reduction is bit-identical for any number of workers.
struct ChunkPlan {
    std::size_t count = 0;
    std::size_t chunk_size = 1;

    explicit ChunkPlan(std::size_t n) : count(n) {
        // target granularity: enough chunks to load 8 threads well, capped
        // so tiny jobs stay single-chunk
        const std::size_t target_chunks = 64;
        chunk_size = (n + target_chunks - 1) / target_chunks;
        if (chunk_size == 0) chunk_size = 1;
    }
    std::size_t chunks() const { return count == 0 ? 0 : (count + chunk_size - 1) / chunk_size; }
    std::size_t begin(std::size_t c) const { return c * chunk_size; }
    std::size_t end(std::size_t c) const {
        std::size_t e = (c + 1) * chunk_size;
        return e > count ? count : e;
    }
};

/// Deterministic map-reduce over [0, count).
/// map_chunk(begin, end) -> R computes one chunk; merge(acc, R) folds results
/// in ascending chunk order regardless of which thread produced them.
template <class R, class MapChunk, class Merge>
R parallel_map_reduce(std::size_t count, R init, MapChunk map_chunk, Merge merge,
                      unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    ChunkPlan plan(count);
    const std::size_t nchunks = plan.chunks();
    if (nchunks == 0) return init;
    if (threads <= 1 || nchunks == 1) {
        R acc = std::move(init);
        for (std::size_t c = 0; c < nchunks; ++c)
            acc = merge(std::move(acc), map_chunk(plan.begin(c), plan.end(c)));
        return acc;
    }
    std::vector<R> results(nchunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= nchunks || failed.load()) return;
            try {
                results[c] = map_chunk(plan.begin(c), plan.end(c));
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned nworkers = threads < nchunks ? threads : static_cast<unsigned>(nchunks);
    pool.reserve(nworkers);
    for (unsigned t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(first_error);

    R acc = std::move(init);
    for (std::size_t c = 0; c < nchunks; ++c) acc = merge(std::move(acc), std::move(results[c]));
    return acc;
}

}  // namespace ffm
