#pragma once

#include "fraclab/dyadic.hpp"

#include <limits>

namespace fraclab {

/// Left side, constant-free right side and their ratio for one inequality
/// instance. 0/0 reports ratio 0; positive/0 reports infinity.
struct IsoReport {
    double lhs = 0.0;
    double rhsCore = 0.0;
    bool densityOk = true; // side condition satisfied (where one applies)

    double ratio() const {
        if (rhsCore > 0.0) return lhs / rhsCore;
        return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
};

/// Interior faces with exactly one endpoint cell in E, times h^{n-1}.
/// Faces on the boundary of the grid cube are not counted.
double discretePerimeter(const CellSet& E);

/// lhs = min(|E|, |complement|)^{(n-1)/n}, rhsCore = discretePerimeter.
IsoReport relativeIsoperimetricRatio(const CellSet& E);

/// lhs = |Q|; rhsCore = integral over Q of |1_E(x) - density of E in the
/// annulus A(x) of radii [a/2, a) around x|. densityOk reports whether
/// eps <= |Q cap E|/|Q| <= 1 - eps.
IsoReport annulusDeviation(const CellSet& E, const CellBox& Q, double a, double densityEpsilon);

struct OneScaleResult {
    CubeFamily family;
    IsoReport report; // lhs = 2^{-k}|Q0|, rhsCore = sum of member volumes
    double kappa = 0.0; // density band slack, one cell slab per cube
};

/// Disjoint cubes of side 2^{-k} side(Q0), each with E-density within
/// [2^{-(n+2)} - kappa, 3/4 + kappa]. Requires E-density of the whole cube
/// within [2^{-(n+1)}, 1/2] and k <= m-1.
OneScaleResult oneScaleDecompose(const CellSet& E, int k);

/// lhs = (|E|/|Q|)^{(n-1)/n}, rhsCore = annulusForm(E, k, s).
/// Requires 2^{-(k+s)n} <= |E|/|Q| <= 1/2.
IsoReport fracIsoperimetricRatio(const CellSet& E, int k, double s);

/// lhs = annulusForm(E, k, 0); rhsCore = discretePerimeter/|Q|^{(n-1)/n}.
IsoReport remarkRatio(const CellSet& E, int k);

} // namespace fraclab
