#include "fraclab/kernels.hpp"
#include "fraclab/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

namespace {

constexpr int64_t kTileCells = 256;

double powAbs(double v, double p) {
    double a = std::abs(v);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

} // namespace

double gagliardoForm(const KernelJob& job) {
    const Grid& g = job.f.grid;
    if (!(job.delta >= 0.0 && job.delta < 1.0))
        throw std::invalid_argument("gagliardoForm: delta in [0,1)");
    if (job.p < 1.0) throw std::invalid_argument("gagliardoForm: p >= 1");
    if (job.outerDensity) requireSameGrid(g, job.outerDensity->grid, "gagliardoForm");
    int n = g.dim();
    int64_t cells = g.cellCount();
    double h2n = std::pow(g.cellVolume(), 2);
    double kernelExp = n + job.delta * job.p;
    double p = job.p;
    const ScalarField& f = job.f;
    const ScalarField* gp = job.outerDensity;

    // centers precomputed once; pair distances derive from coordinates
    std::vector<Vec> centers(size_t(cells), Vec{});
    for (int64_t i = 0; i < cells; ++i) centers[size_t(i)] = g.center(i);

    int64_t numTiles = (cells + kTileCells - 1) / kTileCells;
    double total = parallelReduce(numTiles, [&](int64_t tile) {
        int64_t x0 = tile * kTileCells;
        int64_t x1 = std::min(x0 + kTileCells, cells);
        KahanSum acc;
        for (int64_t x = x0; x < x1; ++x) {
            double gx = gp ? (*gp)[x] : 1.0;
            if (gx == 0.0) continue;
            double fx = f[x];
            const Vec& cx = centers[size_t(x)];
            KahanSum row;
            for (int64_t y = 0; y < cells; ++y) {
                if (y == x) continue;
                double num = powAbs(fx - f[size_t(y)], p);
                if (num == 0.0) continue;
                double d = distance(cx, centers[size_t(y)], n);
                row.add(num / std::pow(d, kernelExp));
            }
            acc.add(row.value() * gx);
        }
        return acc.value() * h2n;
    });
    if (!std::isfinite(total)) throw std::domain_error("gagliardoForm: non-finite accumulation");
    return total;
}

double annulusForm(const CellSet& E, int k, double s) {
    const Grid& g = E.grid;
    if (k < 0 || s < 0.0) throw std::invalid_argument("annulusForm: k >= 0, s >= 0");
    int n = g.dim();
    int N = g.cellsPerAxis;
    double h = g.cellWidth;
    double L = g.cube.side;
    double rOut = std::ldexp(L, -k);
    double rIn = rOut / 2.0;
    if (rIn < 2.0 * h) throw std::invalid_argument("annulusForm: unresolved annulus");
    int reach = int(std::ceil(rOut / h)) + 1;
    int64_t cells = g.cellCount();

    int64_t numTiles = (cells + kTileCells - 1) / kTileCells;
    double sum = parallelReduce(numTiles, [&](int64_t tile) {
        int64_t x0 = tile * kTileCells;
        int64_t x1 = std::min(x0 + kTileCells, cells);
        KahanSum acc;
        for (int64_t x = x0; x < x1; ++x) {
            auto xi = g.coords(x);
            Vec cx = g.center(x);
            bool inE = E.contains(x);
            int64_t count = 0, diff = 0;
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
                if (d2 >= rIn && d2 < rOut) {
                    ++count;
                    if (E.contains(g.index(yi)) != inE) ++diff;
                }
                int d = 0;
                for (; d < n; ++d) {
                    if (++yi[d] < hi[d]) break;
                    yi[d] = lo[d];
                }
                if (d == n) break;
            }
            if (count > 0) acc.add(double(diff) / double(count));
        }
        return acc.value();
    });
    return std::pow(2.0, k + s) * sum / double(cells);
}

double rieszSelfKernel(int n, double alpha, double h) {
    if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("rieszSelfKernel: alpha in (0,n)");
    double J;
    if (n == 1) {
        J = 2.0 * std::pow(0.5, alpha) / alpha;
    } else {
        // J = integral of |u|^{alpha-n} over the unit cell; split off the
        // half-size cell, whose contribution is 2^{-alpha} J by scaling, and
        // integrate the smooth shell by the midpoint rule.
        int R = n == 2 ? 1024 : 96;
        double du = 1.0 / R;
        KahanSum shell;
        std::array<int, 3> it{0, 0, 0};
        int64_t points = 1;
        for (int d = 0; d < n; ++d) points *= R;
        for (int64_t i = 0; i < points; ++i) {
            double r2 = 0.0;
            double maxAbs = 0.0;
            for (int d = 0; d < n; ++d) {
                double u = -0.5 + (it[d] + 0.5) * du;
                r2 += u * u;
                maxAbs = std::max(maxAbs, std::abs(u));
            }
            if (maxAbs >= 0.25) shell.add(std::pow(r2, 0.5 * (alpha - n)));
            for (int d = 0; d < n; ++d) {
                if (++it[d] < R) break;
                it[d] = 0;
            }
        }
        double cellVol = std::pow(du, n);
        J = shell.value() * cellVol / (1.0 - std::pow(2.0, -alpha));
    }
    return std::pow(h, alpha - n) * J;
}

ScalarField rieszPotential(const CellMeasure& mu, double alpha) {
    const Grid& g = mu.grid;
    int n = g.dim();
    if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("rieszPotential: alpha in (0,n)");
    int64_t cells = g.cellCount();
    double self = rieszSelfKernel(n, alpha, g.cellWidth);
    double e = n - alpha;

    std::vector<Vec> centers(size_t(cells), Vec{});
    for (int64_t i = 0; i < cells; ++i) centers[size_t(i)] = g.center(i);

    ScalarField out(g);
    int64_t numTiles = (cells + kTileCells - 1) / kTileCells;
    parallelFor(numTiles, [&](int64_t tile) {
        int64_t x0 = tile * kTileCells;
        int64_t x1 = std::min(x0 + kTileCells, cells);
        for (int64_t x = x0; x < x1; ++x) {
            const Vec& cx = centers[size_t(x)];
            KahanSum acc;
            for (int64_t y = 0; y < cells; ++y) {
                double m = mu[y];
                if (m == 0.0 || y == x) continue;
                acc.add(m / std::pow(distance(cx, centers[size_t(y)], n), e));
            }
            acc.add(mu[x] * self);
            out[x] = acc.value();
        }
    });
    return out;
}

std::vector<std::pair<double, double>> bbmProbe(const ScalarField& f,
                                                const std::vector<double>& deltaList, double p) {
    std::vector<std::pair<double, double>> table;
    table.reserve(deltaList.size());
    for (double d : deltaList) {
        KernelJob job;
        job.f = f;
        job.delta = d;
        job.p = p;
        table.emplace_back(d, (1.0 - d) * gagliardoForm(job));
    }
    return table;
}

} // namespace fraclab
