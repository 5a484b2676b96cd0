#pragma once

#include "fraclab/fields.hpp"

#include <utility>
#include <vector>

namespace fraclab {

/// Double-sum job over the grid cube of f. outerDensity g multiplies the
/// x-side of each pair; callers pass g = mass/h^n to integrate against a
/// measure.
struct KernelJob {
    ScalarField f;
    double delta = 0.5; // in [0,1)
    double p = 1.0;     // >= 1
    const ScalarField* outerDensity = nullptr;
};

/// Sum over ordered cell pairs (x,y), x != y, of
/// |f(x)-f(y)|^p / |c_x-c_y|^{n+delta p} * h^{2n} * g(c_x).
/// Same-cell pairs contribute exactly 0. Deterministic tiled reduction.
double gagliardoForm(const KernelJob& job);

/// 2^{k+s} * avg over x of avg over y in A_k(x) of |1_E(x)-1_E(y)|,
/// A_k(x) = cells of the grid cube with 2^{-k-1}L <= |c_y-c_x| < 2^{-k}L.
/// Requires the inner radius to span at least 2 cells.
double annulusForm(const CellSet& E, int k, double s);

/// Mean of |z|^{alpha-n} over a cell of side h against its center.
double rieszSelfKernel(int n, double alpha, double h);

/// Per cell x: sum over y != x of mass(y)/|c_x-c_y|^{n-alpha} plus
/// mass(x) * rieszSelfKernel.
ScalarField rieszPotential(const CellMeasure& mu, double alpha);

/// (delta, (1-delta) * gagliardoForm) for each delta in the list.
std::vector<std::pair<double, double>> bbmProbe(const ScalarField& f,
                                                const std::vector<double>& deltaList, double p);

} // namespace fraclab
