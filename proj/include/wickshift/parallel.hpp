#pragma once

// Deterministic work dispatch. Heavy loops in this library are maps over
// integer ranges whose per-index results land in preallocated slots; the
// final reduction is always serial and index-ordered, so numeric output is
// bit-identical no matter how many workers run.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wickshift {

inline int default_thread_count() {
    if (const char* env = std::getenv("WICKSHIFT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> slot{default_thread_count()};
    return slot;
}
}  // namespace detail

inline int thread_count() { return detail::thread_count_slot().load(); }

inline void set_thread_count(int n) {
    if (n >= 1) detail::thread_count_slot().store(n);
}

// Invokes fn(begin, end, chunk_index) over [0, total) in fixed-size chunks.
// Chunk boundaries depend only on (total, chunk), never on the worker count.
template <typename Fn>
void parallel_chunks(std::size_t total, std::size_t chunk, Fn&& fn) {
    if (total == 0) return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t nchunks = (total + chunk - 1) / chunk;
    const int workers =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(thread_count()), nchunks));
    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = c * chunk;
        fn(begin, std::min(total, begin + chunk), c);
    };
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < nchunks;) run_chunk(c);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int i = 0; i < workers - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace wickshift
