#include "fraclab/weights.hpp"
#include "fraclab/kernels.hpp"
#include "fraclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fraclab {

WeightField makeWeight(const WeightSpec& spec, const Grid& grid) {
    using Kind = WeightSpec::Kind;
    int n = grid.dim();
    WeightField w(grid);
    switch (spec.kind) {
    case Kind::Constant:
        if (!(spec.value > 0.0)) throw std::invalid_argument("makeWeight: value must be positive");
        for (int64_t i = 0; i < w.size(); ++i) w[i] = spec.value;
        break;
    case Kind::Power: {
        if (spec.beta <= -double(n)) throw std::invalid_argument("makeWeight: beta <= -n");
        Vec c{0.0, 0.0, 0.0};
        for (int d = 0; d < n; ++d) c[d] = grid.cube.corner[d] + grid.cube.side / 2.0;
        for (int64_t i = 0; i < w.size(); ++i) {
            double v = std::pow(distance(grid.center(i), c, n), spec.beta);
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::domain_error("makeWeight: non-positive density");
            w[i] = v;
        }
        break;
    }
    case Kind::Maximal: {
        if (!(spec.t > 0.0 && spec.t <= 1.0)) throw std::invalid_argument("makeWeight: t in (0,1]");
        CellMeasure mu = sampleMeasure(spec.measure, grid);
        if (!(mu.total() > 0.0)) throw std::invalid_argument("makeWeight: zero measure");
        ScalarField M = dyadicFractionalMaximal(mu, spec.alpha);
        for (int64_t i = 0; i < w.size(); ++i) {
            double v = std::pow(M[i], spec.t);
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::domain_error("makeWeight: non-positive density");
            w[i] = v;
        }
        break;
    }
    }
    return w;
}

namespace {

// Dyadic cell boxes of every generation plus the outward-rounded one-third
// shifts, clipped to the grid.
std::vector<CellBox> searchFamily(const Grid& g, bool includeShifts) {
    int n = g.dim();
    int N = g.cellsPerAxis;
    double h = g.cellWidth;
    double L = g.cube.side;
    std::vector<CellBox> boxes;
    for (int k = 0; k <= g.depth; ++k) {
        int K = 1 << k;
        int64_t count = 1;
        for (int d = 0; d < n; ++d) count *= K;
        std::array<int, 3> idx{0, 0, 0};
        for (int64_t c = 0; c < count; ++c) {
            boxes.push_back(dyadicCellBox(g, k, idx));
            for (int d = 0; d < n; ++d) {
                if (++idx[d] < K) break;
                idx[d] = 0;
            }
        }
    }
    if (includeShifts) {
        int64_t shiftCount = 1;
        for (int d = 0; d < n; ++d) shiftCount *= 3;
        for (int64_t s = 1; s < shiftCount; ++s) {
            std::array<int, 3> sh{0, 0, 0};
            int64_t t = s;
            for (int d = 0; d < n; ++d) {
                sh[d] = int(t % 3);
                t /= 3;
            }
            for (int k = 0; k <= g.depth; ++k) {
                double ell = L / double(1 << k);
                int K = 1 << k;
                std::array<int, 3> idx{-1, -1, -1};
                int64_t count = 1;
                for (int d = 0; d < n; ++d) count *= (K + 1);
                for (int64_t c = 0; c < count; ++c) {
                    std::array<int, 3> lo{0, 0, 0};
                    int width = 0;
                    bool empty = false;
                    for (int d = 0; d < n; ++d) {
                        double start = sh[d] * L / 3.0 + idx[d] * ell;
                        double end = start + ell;
                        int cl = std::max(0, int(std::floor(start / h + 1e-12)));
                        int ch = std::min(N, int(std::ceil(end / h - 1e-12)));
                        if (ch <= cl) {
                            empty = true;
                            break;
                        }
                        lo[d] = cl;
                        width = std::max(width, ch - cl);
                    }
                    // rounded shifted boxes need not be square; use the
                    // enclosing square clipped to the grid
                    if (!empty) {
                        CellBox b;
                        b.width = width;
                        for (int d = 0; d < n; ++d)
                            b.lo[d] = std::min(lo[d], N - width);
                        boxes.push_back(b);
                    }
                    for (int d = 0; d < n; ++d) {
                        if (++idx[d] < K) break;
                        idx[d] = -1;
                    }
                }
            }
        }
    }
    return boxes;
}

} // namespace

WeightReport apConstant(const WeightField& w, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("apConstant: p > 1 for the product form");
    const Grid& g = w.grid;
    int n = g.dim();
    double hv = g.cellVolume();
    int64_t cells = g.cellCount();
    WeightReport rep;
    rep.method = "dyadic+third-shift cubes; lower bounds";

    // A_p product form, with the dual average computed against the grid
    // maximum in log space to avoid overflow on large dynamic ranges
    double pp = p / (p - 1.0);
    double T = -std::numeric_limits<double>::infinity();
    std::vector<double> logw(size_t(cells), 0.0);
    for (int64_t i = 0; i < cells; ++i) {
        logw[size_t(i)] = std::log(w[i]);
        T = std::max(T, (1.0 - pp) * logw[size_t(i)]);
    }
    std::vector<double> dual(size_t(cells), 0.0);
    for (int64_t i = 0; i < cells; ++i)
        dual[size_t(i)] = std::exp((1.0 - pp) * logw[size_t(i)] - T);
    BoxSums wSums(g, w.density);
    BoxSums dualSums(g, dual);
    double best = 0.0;
    for (const CellBox& b : searchFamily(g, true)) {
        double cellsB = double(b.cells(n));
        double avgW = wSums.boxSum(b) / cellsB;
        double avgDual = dualSums.boxSum(b) / cellsB;
        double val = avgW * std::pow(avgDual, p - 1.0) * std::exp(T * (p - 1.0));
        best = std::max(best, val);
    }
    rep.ap = best;

    // A_1 via the maximal function of w dx
    CellMeasure mu = w.asMeasure();
    MaximalMode mode = cells <= (int64_t(1) << 16) ? MaximalMode::Brute : MaximalMode::Shifted;
    ScalarField Mw = globalFractionalMaximal(mu, 0.0, mode);
    double a1 = 0.0;
    for (int64_t i = 0; i < cells; ++i) a1 = std::max(a1, Mw[i] / w[i]);
    rep.a1 = a1;

    // Fujii-Wilson A_infinity over dyadic cubes; each cube is itself a
    // power-of-two grid, so the restricted maximal function is exact there
    double ainf = 0.0;
    for (int k = 0; k <= g.depth; ++k) {
        int K = 1 << k;
        int64_t count = 1;
        for (int d = 0; d < n; ++d) count *= K;
        std::array<int, 3> idx{0, 0, 0};
        for (int64_t c = 0; c < count; ++c) {
            CellBox b = dyadicCellBox(g, k, idx);
            Grid sub(b.cube(g), g.depth - k);
            CellMeasure muQ(sub);
            double wQ = 0.0;
            std::array<int, 3> ci = b.lo;
            for (int64_t i = 0; i < b.cells(n); ++i) {
                std::array<int, 3> local{0, 0, 0};
                for (int d = 0; d < n; ++d) local[d] = ci[d] - b.lo[d];
                double massV = w[g.index(ci)] * hv;
                muQ[sub.index(local)] = massV;
                wQ += massV;
                for (int d = 0; d < n; ++d) {
                    if (++ci[d] < b.lo[d] + b.width) break;
                    ci[d] = b.lo[d];
                }
            }
            MaximalMode subMode =
                sub.cellCount() <= (int64_t(1) << 16) ? MaximalMode::Brute : MaximalMode::Shifted;
            ScalarField M = globalFractionalMaximal(muQ, 0.0, subMode);
            KahanSum acc;
            for (int64_t i = 0; i < M.size(); ++i) acc.add(M[i]);
            ainf = std::max(ainf, acc.value() * hv / wQ);
            for (int d = 0; d < n; ++d) {
                if (++idx[d] < K) break;
                idx[d] = 0;
            }
        }
    }
    rep.ainf = ainf;
    return rep;
}

double functionalAf(const ScalarField& f, const WeightField& w, double delta, double p) {
    requireSameGrid(f.grid, w.grid, "functionalAf");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("functionalAf: delta in (0,1)");
    if (p < 1.0) throw std::invalid_argument("functionalAf: p >= 1");
    KernelJob job;
    job.f = f;
    job.delta = delta;
    job.p = p;
    ScalarField dens(w.grid);
    for (int64_t i = 0; i < dens.size(); ++i) dens[i] = w[i];
    job.outerDensity = &dens;
    double form = gagliardoForm(job);
    double wQ = w.totalMass();
    return std::pow(1.0 - delta, 1.0 / p) * std::pow(delta, 1.0 / p - 1.0) *
           std::pow(f.grid.cube.side, delta) * std::pow(form / wQ, 1.0 / p);
}

double dpSdConstant(const std::function<double(const CellBox&)>& a, const WeightField& w, double p,
                    std::optional<double> s, const FamilySource& source) {
    const Grid& g = w.grid;
    int n = g.dim();
    if (p <= 0.0) throw std::invalid_argument("dpSdConstant: p > 0");
    if (s && !(*s > 0.0)) throw std::invalid_argument("dpSdConstant: s > 0");
    BoxSums wSums(g, w.density);
    CellBox root;
    root.width = g.cellsPerAxis;
    double wRoot = wSums.boxSum(root);
    double aRoot = a(root);
    int64_t totalCells = g.cellCount();

    std::vector<std::vector<CellBox>> families;
    switch (source.kind) {
    case FamilySource::Kind::Cz: {
        if (!source.f) throw std::invalid_argument("dpSdConstant: Cz source needs a field");
        std::vector<double> vals(source.f->values);
        std::sort(vals.begin(), vals.end());
        for (double lam : source.lambdas) {
            if (!(lam > 0.0 && lam < 1.0)) throw std::invalid_argument("dpSdConstant: lambda in (0,1)");
            int64_t allowed = int64_t(std::floor(lam * double(totalCells)));
            if (allowed == 0) continue;
            double thr = vals[size_t(totalCells - allowed - (allowed < totalCells ? 1 : 0))];
            CellSet E(g);
            for (int64_t i = 0; i < totalCells; ++i) E.set(i, (*source.f)[i] > thr);
            if (E.count() == 0) continue;
            CubeFamily fam = czDecompose(E, lam);
            if (!fam.members.empty()) families.push_back(fam.members);
        }
        break;
    }
    case FamilySource::Kind::Random: {
        std::mt19937_64 rng(source.seed);
        int genCap = std::min(g.depth, std::max(1, source.maxGen));
        for (int c = 0; c < source.count; ++c) {
            int k = 1 + int(rng() % uint64_t(genCap));
            int K = 1 << k;
            int64_t count = 1;
            for (int d = 0; d < n; ++d) count *= K;
            std::vector<CellBox> fam;
            std::array<int, 3> idx{0, 0, 0};
            for (int64_t i = 0; i < count; ++i) {
                if (rng() & 1) fam.push_back(dyadicCellBox(g, k, idx));
                for (int d = 0; d < n; ++d) {
                    if (++idx[d] < K) break;
                    idx[d] = 0;
                }
            }
            if (!fam.empty()) families.push_back(std::move(fam));
        }
        break;
    }
    case FamilySource::Kind::CoarseExhaustive: {
        int k = std::min({g.depth, source.maxGen, n == 1 ? 4 : (n == 2 ? 2 : 1)});
        int K = 1 << k;
        int64_t count = 1;
        for (int d = 0; d < n; ++d) count *= K;
        if (count > 16) throw std::invalid_argument("dpSdConstant: exhaustive family too large");
        std::vector<CellBox> all;
        std::array<int, 3> idx{0, 0, 0};
        for (int64_t i = 0; i < count; ++i) {
            all.push_back(dyadicCellBox(g, k, idx));
            for (int d = 0; d < n; ++d) {
                if (++idx[d] < K) break;
                idx[d] = 0;
            }
        }
        for (uint64_t mask = 1; mask < (uint64_t(1) << count); ++mask) {
            std::vector<CellBox> fam;
            for (int64_t i = 0; i < count; ++i)
                if (mask & (uint64_t(1) << i)) fam.push_back(all[size_t(i)]);
            families.push_back(std::move(fam));
        }
        break;
    }
    }

    double best = 0.0;
    for (const auto& fam : families) {
        KahanSum sum;
        int64_t unionCells = 0;
        for (const CellBox& b : fam) {
            sum.add(std::pow(a(b), p) * wSums.boxSum(b) / wRoot);
            unionCells += b.cells(n);
        }
        double val = std::pow(sum.value(), 1.0 / p);
        if (s) val /= std::pow(double(unionCells) / double(totalCells), 1.0 / *s);
        if (aRoot == 0.0) {
            if (val > 0.0) throw std::domain_error("dpSdConstant: zero root functional");
            continue;
        }
        best = std::max(best, val / aRoot);
    }
    return best;
}

} // namespace fraclab
