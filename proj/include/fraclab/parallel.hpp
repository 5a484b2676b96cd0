#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace fraclab {

/// Global worker count. Results of all reductions are bit-identical for any
/// value: work is split into a fixed tile decomposition and tile results are
/// combined sequentially in tile order.
void setThreadCount(int n);
int threadCount();

/// Neumaier compensated accumulator.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// Runs fn(tile) for tile = 0..numTiles-1 on the worker pool.
void parallelFor(int64_t numTiles, const std::function<void(int64_t)>& fn);

/// Per-tile partial sums combined in fixed tile order.
double parallelReduce(int64_t numTiles, const std::function<double(int64_t)>& tileSum);

} // namespace fraclab
