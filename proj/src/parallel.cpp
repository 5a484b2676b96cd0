#include "fraclab/parallel.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace fraclab {

namespace {
int gThreads = int(std::thread::hardware_concurrency() ? std::thread::hardware_concurrency() : 1);
}

void setThreadCount(int n) { gThreads = n < 1 ? 1 : n; }
int threadCount() { return gThreads; }

void parallelFor(int64_t numTiles, const std::function<void(int64_t)>& fn) {
    int workers = gThreads;
    if (workers <= 1 || numTiles <= 1) {
        for (int64_t t = 0; t < numTiles; ++t) fn(t);
        return;
    }
    if (workers > numTiles) workers = int(numTiles);
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int64_t t = next.fetch_add(1);
                if (t >= numTiles) return;
                fn(t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double parallelReduce(int64_t numTiles, const std::function<double(int64_t)>& tileSum) {
    std::vector<double> partial(size_t(numTiles), 0.0);
    parallelFor(numTiles, [&](int64_t t) { partial[size_t(t)] = tileSum(t); });
    KahanSum acc;
    for (double v : partial) acc.add(v);
    return acc.value();
}

} // namespace fraclab
