#include "fraclab/dyadic.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace fraclab {

std::vector<DyadicCube> enumerateDyadic(const Cube& root, int k) {
    if (k < 0) throw std::invalid_argument("enumerateDyadic: k must be >= 0");
    int K = 1 << k;
    int n = root.dim;
    std::vector<DyadicCube> out;
    int64_t count = 1;
    for (int d = 0; d < n; ++d) count *= K;
    out.reserve(size_t(count));
    std::array<int, 3> ix{0, 0, 0};
    for (int64_t i = 0; i < count; ++i) {
        out.push_back(DyadicCube{root, k, ix});
        for (int d = 0; d < n; ++d) {
            if (++ix[d] < K) break;
            ix[d] = 0;
        }
    }
    return out;
}

CellBox dyadicCellBox(const Grid& g, int generation, const std::array<int, 3>& index) {
    if (generation > g.depth)
        throw std::invalid_argument("dyadicCellBox: generation exceeds grid depth");
    int w = g.cellsPerAxis >> generation;
    CellBox b;
    b.width = w;
    for (int d = 0; d < g.dim(); ++d) b.lo[d] = index[d] * w;
    return b;
}

bool pairwiseDisjoint(const CubeFamily& fam) {
    int n = fam.grid.dim();
    for (size_t i = 0; i < fam.members.size(); ++i)
        for (size_t j = i + 1; j < fam.members.size(); ++j) {
            const CellBox& a = fam.members[i];
            const CellBox& b = fam.members[j];
            bool overlap = true;
            for (int d = 0; d < n; ++d)
                if (a.lo[d] + a.width <= b.lo[d] || b.lo[d] + b.width <= a.lo[d]) {
                    overlap = false;
                    break;
                }
            if (overlap) return false;
        }
    return true;
}

BoxSums::BoxSums(const Grid& g, const std::vector<double>& cellData)
    : dim_(g.dim()), N_(g.cellsPerAxis) {
    int n1 = N_ + 1;
    int n2 = dim_ >= 2 ? N_ + 1 : 2;
    int n3 = dim_ >= 3 ? N_ + 1 : 2;
    rows_ = n1;
    slices_ = size_t(n1) * n2;
    pre_.assign(size_t(n1) * n2 * n3, 0.0);
    for (int k = 1; k < (dim_ >= 3 ? n3 : 2); ++k)
        for (int j = 1; j < (dim_ >= 2 ? n2 : 2); ++j)
            for (int i = 1; i < n1; ++i) {
                std::array<int, 3> ix{i - 1, j - 1, k - 1};
                double v = cellData[size_t(g.index(ix))];
                pre_[cell(i, j, k)] = v + pre_[cell(i - 1, j, k)] + pre_[cell(i, j - 1, k)] +
                                      pre_[cell(i, j, k - 1)] - pre_[cell(i - 1, j - 1, k)] -
                                      pre_[cell(i - 1, j, k - 1)] - pre_[cell(i, j - 1, k - 1)] +
                                      pre_[cell(i - 1, j - 1, k - 1)];
            }
}

double BoxSums::sum(const std::array<int, 3>& lo, const std::array<int, 3>& hi) const {
    int x0 = lo[0], x1 = hi[0];
    int y0 = dim_ >= 2 ? lo[1] : 0, y1 = dim_ >= 2 ? hi[1] : 1;
    int z0 = dim_ >= 3 ? lo[2] : 0, z1 = dim_ >= 3 ? hi[2] : 1;
    return pre_[cell(x1, y1, z1)] - pre_[cell(x0, y1, z1)] - pre_[cell(x1, y0, z1)] -
           pre_[cell(x1, y1, z0)] + pre_[cell(x0, y0, z1)] + pre_[cell(x0, y1, z0)] +
           pre_[cell(x1, y0, z0)] - pre_[cell(x0, y0, z0)];
}

namespace {

// Per-generation aggregation of cell data: level k holds the sum over each
// dyadic cube of generation k.
std::vector<std::vector<double>> aggregateLevels(const Grid& g, const std::vector<double>& cells) {
    int n = g.dim();
    int m = g.depth;
    std::vector<std::vector<double>> levels(size_t(m + 1));
    levels[size_t(m)] = cells;
    for (int k = m - 1; k >= 0; --k) {
        int K = 1 << k;
        int64_t count = 1;
        for (int d = 0; d < n; ++d) count *= K;
        std::vector<double> lvl(size_t(count), 0.0);
        const std::vector<double>& fine = levels[size_t(k + 1)];
        int Kf = K * 2;
        std::array<int, 3> ix{0, 0, 0};
        int64_t fineCount = int64_t(fine.size());
        for (int64_t i = 0; i < fineCount; ++i) {
            int64_t parent = 0;
            for (int d = n - 1; d >= 0; --d) parent = parent * K + ix[d] / 2;
            lvl[size_t(parent)] += fine[size_t(i)];
            for (int d = 0; d < n; ++d) {
                if (++ix[d] < Kf) break;
                ix[d] = 0;
            }
        }
        levels[size_t(k)] = std::move(lvl);
    }
    return levels;
}

} // namespace

CubeFamily czDecompose(const CellSet& E, double lambda) {
    const Grid& g = E.grid;
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("czDecompose: lambda in (0,1)");
    int n = g.dim();
    int m = g.depth;
    std::vector<double> ind(size_t(E.size()));
    for (int64_t i = 0; i < E.size(); ++i) ind[size_t(i)] = E.contains(i) ? 1.0 : 0.0;
    auto counts = aggregateLevels(g, ind);
    double rootCells = double(g.cellCount());
    if (counts[0][0] > lambda * rootCells)
        throw std::invalid_argument("czDecompose: |E| > lambda |Q|");

    CubeFamily fam;
    fam.grid = g;
    fam.disjoint = true;
    double thresholdFactor = lambda / double(int64_t(1) << n); // 2^-n lambda

    // Recursive selection: pick a cube when its E-density first exceeds
    // 2^-n lambda, otherwise recurse into its children.
    struct Rec {
        int n, m;
        const std::vector<std::vector<double>>& counts;
        double thresholdFactor;
        CubeFamily& fam;
        const Grid& g;
        void visit(int k, std::array<int, 3> idx) {
            int K = 1 << k;
            int64_t lin = 0;
            for (int d = n - 1; d >= 0; --d) lin = lin * K + idx[d];
            double cnt = counts[size_t(k)][size_t(lin)];
            if (cnt == 0.0) return;
            double cubeCells = std::ldexp(1.0, (m - k) * n);
            if (cnt > thresholdFactor * cubeCells) {
                fam.members.push_back(dyadicCellBox(g, k, idx));
                return;
            }
            // k < m here: at k == m density is 0 or 1 and 1 > 2^-n lambda.
            for (int child = 0; child < (1 << n); ++child) {
                std::array<int, 3> ci = idx;
                for (int d = 0; d < n; ++d) ci[d] = 2 * idx[d] + ((child >> d) & 1);
                visit(k + 1, ci);
            }
        }
    } rec{n, m, counts, thresholdFactor, fam, g};

    // Mirror the paper's process: the root is selected only when its density
    // already exceeds 2^-n lambda.
    rec.visit(0, {0, 0, 0});
    return fam;
}

ScalarField dyadicFractionalMaximal(const CellMeasure& mu, double alpha) {
    const Grid& g = mu.grid;
    int n = g.dim();
    if (alpha < 0.0 || alpha > n)
        throw std::invalid_argument("dyadicFractionalMaximal: alpha in [0,n]");
    int m = g.depth;
    auto masses = aggregateLevels(g, mu.mass);
    // best[k] = max over ancestors up to generation k of side^alpha mu/vol
    std::vector<double> best;
    for (int k = 0; k <= m; ++k) {
        double side = g.cube.side / double(1 << k);
        double vol = std::pow(side, n);
        double factor = std::pow(side, alpha) / vol;
        std::vector<double>& lvl = masses[size_t(k)];
        std::vector<double> cur(lvl.size());
        int K = 1 << k;
        std::array<int, 3> ix{0, 0, 0};
        for (size_t i = 0; i < lvl.size(); ++i) {
            double v = lvl[i] * factor;
            if (k > 0) {
                int Kp = K / 2;
                int64_t parent = 0;
                for (int d = n - 1; d >= 0; --d) parent = parent * Kp + ix[d] / 2;
                v = std::max(v, best[size_t(parent)]);
            }
            cur[i] = v;
            for (int d = 0; d < n; ++d) {
                if (++ix[d] < K) break;
                ix[d] = 0;
            }
        }
        best = std::move(cur);
    }
    ScalarField out(g);
    out.values = std::move(best);
    return out;
}

namespace {

// out[i] = max over p in [i-w+1, i] (clamped to [0, len-1]) of arr[p],
// where arr has length len = N-w+1 and out has length N.
void slidingWindowMax(const std::vector<double>& arr, int w, int N, std::vector<double>& out) {
    int len = int(arr.size());
    std::deque<int> dq;
    out.assign(size_t(N), 0.0);
    for (int i = 0; i < N; ++i) {
        int hi = std::min(i, len - 1);
        int lo = std::max(0, i - w + 1);
        // push new candidates up to hi
        static thread_local int lastPushed;
        (void)lastPushed;
        // (re-scan approach below keeps the deque logic simple)
        while (!dq.empty() && dq.front() < lo) dq.pop_front();
        int start = dq.empty() ? lo : std::max(dq.back() + 1, lo);
        for (int p = start; p <= hi; ++p) {
            while (!dq.empty() && arr[size_t(dq.back())] <= arr[size_t(p)]) dq.pop_back();
            dq.push_back(p);
        }
        out[size_t(i)] = arr[size_t(dq.front())];
    }
}

} // namespace

ScalarField globalFractionalMaximal(const CellMeasure& mu, double alpha, MaximalMode mode) {
    const Grid& g = mu.grid;
    int n = g.dim();
    if (alpha < 0.0 || alpha > n)
        throw std::invalid_argument("globalFractionalMaximal: alpha in [0,n]");
    int N = g.cellsPerAxis;
    double h = g.cellWidth;

    if (mode == MaximalMode::Brute) {
        if (g.cellCount() > (int64_t(1) << 16))
            throw std::invalid_argument("globalFractionalMaximal: brute mode on oversized grid");
        BoxSums sums(g, mu.mass);
        ScalarField out(g);
        for (double& v : out.values) v = 0.0;
        std::vector<double> line, dil;
        for (int w = 1; w <= N; ++w) {
            double side = w * h;
            double factor = std::pow(side, alpha) / std::pow(side, n);
            int len = N - w + 1;
            // ratio over all positions, then per-axis max dilation
            int64_t posCount = 1;
            for (int d = 0; d < n; ++d) posCount *= len;
            std::vector<double> ratio(size_t(posCount), 0.0);
            std::array<int, 3> p{0, 0, 0};
            for (int64_t i = 0; i < posCount; ++i) {
                std::array<int, 3> hi = p;
                for (int d = 0; d < n; ++d) hi[d] += w;
                ratio[size_t(i)] = sums.sum(p, hi) * factor;
                for (int d = 0; d < n; ++d) {
                    if (++p[d] < len) break;
                    p[d] = 0;
                }
            }
            // dilate axis by axis from position-array (len per axis) to
            // cell-array (N per axis)
            std::array<int, 3> dims{len, n >= 2 ? len : 1, n >= 3 ? len : 1};
            std::vector<double> cur = std::move(ratio);
            for (int d = 0; d < n; ++d) {
                std::array<int, 3> outDims = dims;
                outDims[d] = N;
                int64_t outCount = int64_t(outDims[0]) * outDims[1] * outDims[2];
                std::vector<double> nxt(size_t(outCount), 0.0);
                // iterate over lines along axis d
                std::array<int, 3> it{0, 0, 0};
                int64_t lines = outCount / outDims[d];
                for (int64_t l = 0; l < lines; ++l) {
                    line.assign(size_t(dims[d]), 0.0);
                    for (int x = 0; x < dims[d]; ++x) {
                        std::array<int, 3> ix = it;
                        ix[d] = x;
                        line[size_t(x)] =
                            cur[(size_t(ix[2]) * dims[1] + ix[1]) * dims[0] + ix[0]];
                    }
                    slidingWindowMax(line, w, N, dil);
                    for (int x = 0; x < N; ++x) {
                        std::array<int, 3> ix = it;
                        ix[d] = x;
                        nxt[(size_t(ix[2]) * outDims[1] + ix[1]) * outDims[0] + ix[0]] =
                            dil[size_t(x)];
                    }
                    // advance the non-d axes
                    for (int dd = 0; dd < 3; ++dd) {
                        if (dd == d) continue;
                        if (++it[dd] < outDims[dd]) break;
                        it[dd] = 0;
                    }
                }
                dims = outDims;
                cur = std::move(nxt);
            }
            for (int64_t i = 0; i < out.size(); ++i) {
                auto ix = g.coords(i);
                double v = cur[(size_t(ix[2]) * dims[1] + ix[1]) * dims[0] + ix[0]];
                if (v > out[i]) out[i] = v;
            }
        }
        return out;
    }

    // Shifted mode: one-third trick. Each shifted dyadic cube is rounded
    // outward to cell boundaries; the candidate value uses the enclosing
    // grid-aligned cube of side equal to the largest rounded extent, which
    // keeps every candidate below the brute supremum.
    BoxSums sums(g, mu.mass);
    ScalarField out(g);
    for (double& v : out.values) v = 0.0;
    double side0 = g.cube.side;
    int shiftsPerAxis = 3;
    int64_t shiftCount = 1;
    for (int d = 0; d < n; ++d) shiftCount *= shiftsPerAxis;
    for (int64_t s = 0; s < shiftCount; ++s) {
        std::array<int, 3> sh{0, 0, 0};
        int64_t t = s;
        for (int d = 0; d < n; ++d) {
            sh[d] = int(t % 3);
            t /= 3;
        }
        for (int k = 0; k <= g.depth; ++k) {
            double ell = side0 / double(1 << k);
            int K = 1 << k;
            // shifted cubes with any overlap: index from -1 to K-1 per axis
            std::array<int, 3> idx{-1, -1, -1};
            int64_t total = 1;
            for (int d = 0; d < n; ++d) total *= (K + 1);
            for (int64_t c = 0; c < total; ++c) {
                std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
                bool empty = false;
                for (int d = 0; d < n; ++d) {
                    double start = sh[d] * side0 / 3.0 + idx[d] * ell;
                    double end = start + ell;
                    int cl = int(std::floor(start / h + 1e-12));
                    int ch = int(std::ceil(end / h - 1e-12));
                    cl = std::max(cl, 0);
                    ch = std::min(ch, N);
                    if (ch <= cl) {
                        empty = true;
                        break;
                    }
                    lo[d] = cl;
                    hi[d] = ch;
                }
                if (!empty) {
                    int w = 0;
                    for (int d = 0; d < n; ++d) w = std::max(w, hi[d] - lo[d]);
                    double cubeSide = w * h;
                    double val =
                        sums.sum(lo, hi) * std::pow(cubeSide, alpha) / std::pow(cubeSide, n);
                    if (val > 0.0) {
                        // assign to every cell of the rounded box
                        std::array<int, 3> ix = lo;
                        for (;;) {
                            int64_t ci = g.index(ix);
                            if (val > out[ci]) out[ci] = val;
                            int d = 0;
                            for (; d < n; ++d) {
                                if (++ix[d] < hi[d]) break;
                                ix[d] = lo[d];
                            }
                            if (d == n) break;
                        }
                    }
                }
                for (int d = 0; d < n; ++d) {
                    if (++idx[d] < K) break;
                    idx[d] = -1;
                }
            }
        }
    }
    return out;
}

} // namespace fraclab
