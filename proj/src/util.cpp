#include "qnslab/util.hpp"

#include <atomic>
#include <cstdlib>

namespace qnslab {

std::size_t chunk_count(std::size_t count, std::size_t chunk) {
    return chunk == 0 ? 0 : (count + chunk - 1) / chunk;
}

void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                     int threads) {
    if (count == 0) return;
    if (chunk == 0) chunk = count;
    const std::size_t nchunks = chunk_count(count, chunk);
    threads = std::max(1, threads);
    const std::size_t workers = std::min<std::size_t>(threads, nchunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            body(c, c * chunk, std::min(count, (c + 1) * chunk));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                body(c, c * chunk, std::min(count, (c + 1) * chunk));
            }
        });
    }
    for (auto& t : pool) t.join();
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QNSLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace qnslab
