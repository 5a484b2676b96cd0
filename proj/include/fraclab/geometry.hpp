#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fraclab {

using Vec = std::array<double, 3>;

/// Axis-aligned cube in dimension 1, 2 or 3.
struct Cube {
    int dim = 1;
    Vec corner{0.0, 0.0, 0.0};
    double side = 1.0;

    Cube() = default;
    Cube(int dim_, Vec corner_, double side_) : dim(dim_), corner(corner_), side(side_) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("Cube: dim must be 1, 2 or 3");
        if (!(side > 0.0)) throw std::invalid_argument("Cube: side must be positive");
    }

    double volume() const {
        double v = side;
        for (int d = 1; d < dim; ++d) v *= side;
        return v;
    }

    static Cube unit(int dim_) { return Cube(dim_, {0.0, 0.0, 0.0}, 1.0); }
    static Cube centered(int dim_, double side_) {
        return Cube(dim_, {-side_ / 2, -side_ / 2, -side_ / 2}, side_);
    }
};

/// Uniform subdivision of a cube into 2^m cells per axis. Cells are
/// half-open; values, sets and measures are sampled at cell centers.
struct Grid {
    Cube cube;
    int depth = 0;          // m
    int cellsPerAxis = 1;   // N = 2^m
    double cellWidth = 1.0; // h = side / N

    Grid() = default;
    Grid(const Cube& c, int m) : cube(c), depth(m) {
        if (m < 0 || m > 14) throw std::invalid_argument("Grid: depth m out of range [0,14]");
        cellsPerAxis = 1 << m;
        cellWidth = c.side / cellsPerAxis;
        // memory guard
        if (cellCount() > (int64_t(1) << 24))
            throw std::invalid_argument("Grid: more than 2^24 cells");
    }

    int dim() const { return cube.dim; }

    int64_t cellCount() const {
        int64_t n = 1;
        for (int d = 0; d < dim(); ++d) n *= cellsPerAxis;
        return n;
    }

    double cellVolume() const {
        double v = cellWidth;
        for (int d = 1; d < dim(); ++d) v *= cellWidth;
        return v;
    }

    // Linear index <-> per-axis indices (axis 0 fastest).
    int64_t index(const std::array<int, 3>& ix) const {
        int64_t idx = 0;
        for (int d = dim() - 1; d >= 0; --d) idx = idx * cellsPerAxis + ix[d];
        return idx;
    }
    std::array<int, 3> coords(int64_t idx) const {
        std::array<int, 3> ix{0, 0, 0};
        for (int d = 0; d < dim(); ++d) {
            ix[d] = int(idx % cellsPerAxis);
            idx /= cellsPerAxis;
        }
        return ix;
    }

    Vec center(int64_t idx) const {
        auto ix = coords(idx);
        Vec c{0.0, 0.0, 0.0};
        for (int d = 0; d < dim(); ++d) c[d] = cube.corner[d] + (ix[d] + 0.5) * cellWidth;
        return c;
    }

    bool sameAs(const Grid& o) const {
        return dim() == o.dim() && depth == o.depth && cube.side == o.cube.side &&
               cube.corner == o.cube.corner;
    }
};

inline double distance(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        double t = a[d] - b[d];
        s += t * t;
    }
    return std::sqrt(s);
}

inline void requireSameGrid(const Grid& a, const Grid& b, const char* what) {
    if (!a.sameAs(b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

} // namespace fraclab
