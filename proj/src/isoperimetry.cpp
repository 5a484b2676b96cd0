#include "fraclab/isoperimetry.hpp"
#include "fraclab/kernels.hpp"
#include "fraclab/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

double discretePerimeter(const CellSet& E) {
    const Grid& g = E.grid;
    int n = g.dim();
    int N = g.cellsPerAxis;
    int64_t faces = 0;
    for (int64_t i = 0; i < E.size(); ++i) {
        auto ix = g.coords(i);
        bool in = E.contains(i);
        int64_t stride = 1;
        for (int d = 0; d < n; ++d) {
            if (ix[d] + 1 < N && E.contains(i + stride) != in) ++faces;
            stride *= N;
        }
    }
    return double(faces) * std::pow(g.cellWidth, n - 1);
}

IsoReport relativeIsoperimetricRatio(const CellSet& E) {
    const Grid& g = E.grid;
    int n = g.dim();
    double inVol = E.volume();
    double outVol = g.cube.volume() - inVol;
    IsoReport r;
    r.lhs = std::pow(std::min(inVol, outVol), double(n - 1) / n);
    r.rhsCore = discretePerimeter(E);
    return r;
}

IsoReport annulusDeviation(const CellSet& E, const CellBox& Q, double a, double densityEpsilon) {
    const Grid& g = E.grid;
    int n = g.dim();
    int N = g.cellsPerAxis;
    double h = g.cellWidth;
    double L = g.cube.side;
    if (!(a > 0.0 && a <= L / 2.0)) throw std::invalid_argument("annulusDeviation: a in (0, side/2]");
    double sideQ = Q.width * h;
    double sideBound = a * std::sqrt(M_PI) / (std::ldexp(1.0, n + 4) * n);
    if (sideQ > sideBound) throw std::invalid_argument("annulusDeviation: Q too large for a");
    if (a / 2.0 < 2.0 * h) throw std::invalid_argument("annulusDeviation: unresolved annulus");
    if (!(densityEpsilon > 0.0 && densityEpsilon < 0.5))
        throw std::invalid_argument("annulusDeviation: densityEpsilon in (0, 1/2)");

    int reach = int(std::ceil(a / h)) + 1;
    double hv = g.cellVolume();
    int64_t qCells = Q.cells(n);
    int64_t inQ = 0;
    KahanSum acc;
    std::array<int, 3> xi = Q.lo;
    for (int64_t c = 0; c < qCells; ++c) {
        int64_t x = g.index(xi);
        Vec cx = g.center(x);
        bool inE = E.contains(x);
        if (inE) ++inQ;
        int64_t count = 0, hits = 0;
        std::array<int, 3> lo{0, 0, 0}, hi{1, 1, 1};
        for (int d = 0; d < n; ++d) {
            lo[d] = std::max(0, xi[d] - reach);
            hi[d] = std::min(N, xi[d] + reach + 1);
        }
        std::array<int, 3> yi = lo;
        for (;;) {
            Vec cy{0.0, 0.0, 0.0};
            for (int d = 0; d < n; ++d) cy[d] = g.cube.corner[d] + (yi[d] + 0.5) * h;
            double d2 = distance(cx, cy, n);
            if (d2 >= a / 2.0 && d2 < a) {
                ++count;
                if (E.contains(g.index(yi))) ++hits;
            }
            int d = 0;
            for (; d < n; ++d) {
                if (++yi[d] < hi[d]) break;
                yi[d] = lo[d];
            }
            if (d == n) break;
        }
        double dens = count > 0 ? double(hits) / double(count) : 0.0;
        acc.add(std::abs((inE ? 1.0 : 0.0) - dens));
        int d = 0;
        for (; d < n; ++d) {
            if (++xi[d] < Q.lo[d] + Q.width) break;
            xi[d] = Q.lo[d];
        }
        if (d == n && c + 1 < qCells) throw std::logic_error("annulusDeviation: iteration");
    }
    IsoReport r;
    r.lhs = double(qCells) * hv;
    r.rhsCore = acc.value() * hv;
    double dens = double(inQ) / double(qCells);
    r.densityOk = dens >= densityEpsilon && dens <= 1.0 - densityEpsilon;
    return r;
}

namespace {

bool boxesOverlap(const CellBox& a, const CellBox& b, int n) {
    for (int d = 0; d < n; ++d)
        if (a.lo[d] + a.width <= b.lo[d] || b.lo[d] + b.width <= a.lo[d]) return false;
    return true;
}

} // namespace

OneScaleResult oneScaleDecompose(const CellSet& E, int k) {
    const Grid& g = E.grid;
    int n = g.dim();
    int m = g.depth;
    if (k < 0 || k > m - 1) throw std::invalid_argument("oneScaleDecompose: k in [0, m-1]");
    int64_t total = g.cellCount();
    int64_t cntE = E.count();
    // density of E in the whole cube must lie in [2^{-(n+1)}, 1/2]
    if (cntE * (int64_t(1) << (n + 1)) < total || cntE * 2 > total)
        throw std::invalid_argument("oneScaleDecompose: E-density outside [2^-(n+1), 1/2]");

    std::vector<double> ind(size_t(total), 0.0);
    for (int64_t i = 0; i < total; ++i) ind[size_t(i)] = E.contains(i) ? 1.0 : 0.0;
    BoxSums sums(g, ind);

    int K = 1 << k;
    int w = g.cellsPerAxis >> k;
    int64_t cubeCells = 1;
    for (int d = 0; d < n; ++d) cubeCells *= w;
    auto inFamily = [&](const std::array<int, 3>& idx) {
        CellBox b = dyadicCellBox(g, k, idx);
        int64_t cnt = int64_t(std::llround(sums.boxSum(b)));
        return cnt * (int64_t(1) << (n + 2)) >= cubeCells;
    };
    auto boxCount = [&](const CellBox& b) {
        return int64_t(std::llround(sums.boxSum(b)));
    };

    int64_t genCubes = 1;
    for (int d = 0; d < n; ++d) genCubes *= K;
    int64_t aCells = 0;
    std::vector<std::array<int, 3>> selected; // members of the high-density collection
    std::array<int, 3> idx{0, 0, 0};
    for (int64_t c = 0; c < genCubes; ++c) {
        if (inFamily(idx)) {
            selected.push_back(idx);
            aCells += cubeCells;
        }
        for (int d = 0; d < n; ++d) {
            if (++idx[d] < K) break;
            idx[d] = 0;
        }
    }

    OneScaleResult res;
    res.family.grid = g;
    res.family.disjoint = true;
    res.kappa = 1.0 / double(w);

    if (aCells * 4 > total * 3) {
        // dense case: keep the high-density cubes whose density is <= 3/4
        for (const auto& ix : selected) {
            CellBox b = dyadicCellBox(g, k, ix);
            if (boxCount(b) * 4 <= cubeCells * 3) res.family.members.push_back(b);
        }
    } else {
        // boundary case: slide each boundary cube toward a low-density
        // neighbour, one cell slab at a time, and stop at the last position
        // where the density is still above the threshold
        std::vector<CellBox> candidates;
        for (const auto& ix : selected) {
            int dir = -1, sign = 0;
            for (int d = 0; d < n && dir < 0; ++d)
                for (int sgn : {-1, 1}) {
                    std::array<int, 3> nb = ix;
                    nb[d] += sgn;
                    if (nb[d] < 0 || nb[d] >= K) continue;
                    if (!inFamily(nb)) {
                        dir = d;
                        sign = sgn;
                        break;
                    }
                }
            if (dir < 0) continue;
            CellBox best = dyadicCellBox(g, k, ix);
            for (int t = 1; t <= w; ++t) {
                CellBox b = best;
                b.lo = dyadicCellBox(g, k, ix).lo;
                b.lo[dir] += sign * t;
                if (boxCount(b) * (int64_t(1) << (n + 2)) < cubeCells) break;
                best = b;
            }
            candidates.push_back(best);
        }
        // greedy maximal disjoint subcollection in construction order
        for (const CellBox& b : candidates) {
            bool ok = true;
            for (const CellBox& kept : res.family.members)
                if (boxesOverlap(b, kept, n)) {
                    ok = false;
                    break;
                }
            if (ok) res.family.members.push_back(b);
        }
        if (res.family.members.empty())
            throw std::logic_error("oneScaleDecompose: empty construction");
    }

    double hv = g.cellVolume();
    res.report.lhs = std::ldexp(double(total) * hv, -k);
    double sum = 0.0;
    for (const CellBox& b : res.family.members) sum += double(b.cells(n)) * hv;
    res.report.rhsCore = sum;
    return res;
}

IsoReport fracIsoperimetricRatio(const CellSet& E, int k, double s) {
    const Grid& g = E.grid;
    int n = g.dim();
    double dens = double(E.count()) / double(g.cellCount());
    double floor = std::pow(2.0, -(k + s) * n);
    if (dens < floor || dens > 0.5)
        throw std::invalid_argument("fracIsoperimetricRatio: density outside [2^-(k+s)n, 1/2]");
    IsoReport r;
    r.lhs = std::pow(dens, double(n - 1) / n);
    r.rhsCore = annulusForm(E, k, s);
    return r;
}

IsoReport remarkRatio(const CellSet& E, int k) {
    const Grid& g = E.grid;
    int n = g.dim();
    IsoReport r;
    r.lhs = annulusForm(E, k, 0.0);
    r.rhsCore = discretePerimeter(E) / std::pow(g.cube.volume(), double(n - 1) / n);
    return r;
}

} // namespace fraclab
