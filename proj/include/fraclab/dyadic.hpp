#pragma once

#include "fraclab/fields.hpp"

#include <vector>

namespace fraclab {

/// Dyadic subcube of generation k: side 2^-k * root.side.
struct DyadicCube {
    Cube root;
    int generation = 0;
    std::array<int, 3> index{0, 0, 0}; // each component in [0, 2^k)

    double side() const { return root.side / double(1 << generation); }
    Cube cube() const {
        Vec c = root.corner;
        for (int d = 0; d < root.dim; ++d) c[d] += index[d] * side();
        return Cube(root.dim, c, side());
    }
};

/// Cube in cell units on a grid: cells [lo, lo+width) per axis.
struct CellBox {
    std::array<int, 3> lo{0, 0, 0};
    int width = 1;

    Cube cube(const Grid& g) const {
        Vec c = g.cube.corner;
        for (int d = 0; d < g.dim(); ++d) c[d] += lo[d] * g.cellWidth;
        return Cube(g.dim(), c, width * g.cellWidth);
    }
    int64_t cells(int dim) const {
        int64_t n = 1;
        for (int d = 0; d < dim; ++d) n *= width;
        return n;
    }
};

struct CubeFamily {
    Grid grid;
    std::vector<CellBox> members;
    bool disjoint = false;
};

/// Returns true when the members are pairwise interior-disjoint.
bool pairwiseDisjoint(const CubeFamily& fam);

/// The 2^{kn} dyadic subcubes of generation k.
std::vector<DyadicCube> enumerateDyadic(const Cube& root, int k);

/// Cell box of a dyadic cube on a grid with depth >= k.
CellBox dyadicCellBox(const Grid& g, int generation, const std::array<int, 3>& index);

/// Calderon-Zygmund cubes of E in the grid cube at level lambda.
/// Requires |E| <= lambda |Q|; stops at single cells.
CubeFamily czDecompose(const CellSet& E, double lambda);

/// Per cell: max over its dyadic ancestors Q of side(Q)^alpha mu(Q)/|Q|.
ScalarField dyadicFractionalMaximal(const CellMeasure& mu, double alpha);

enum class MaximalMode { Brute, Shifted };

/// Fractional maximal function over cubes inside the grid cube.
/// Brute: exact sup over all cubes with grid-aligned corners (<= 2^16 cells).
/// Shifted: one-third trick over 3^n translated dyadic grids, rounded
/// outward to cell boundaries; a pointwise lower bound of Brute.
ScalarField globalFractionalMaximal(const CellMeasure& mu, double alpha, MaximalMode mode);

/// Prefix-sum table for box sums of per-cell data.
class BoxSums {
  public:
    BoxSums(const Grid& g, const std::vector<double>& cellData);
    /// Sum over cells [lo, hi) per axis.
    double sum(const std::array<int, 3>& lo, const std::array<int, 3>& hi) const;
    double boxSum(const CellBox& b) const {
        std::array<int, 3> hi = b.lo;
        for (int d = 0; d < dim_; ++d) hi[d] += b.width;
        return sum(b.lo, hi);
    }

  private:
    int dim_;
    int N_;
    size_t rows_ = 0;   // stride of axis 1
    size_t slices_ = 0; // stride of axis 2
    std::vector<double> pre_; // inclusive prefix table; collapsed axes have size 2
    size_t cell(int i, int j, int k) const {
        return size_t(k) * slices_ + size_t(j) * rows_ + size_t(i);
    }
};

} // namespace fraclab
