#pragma once

#include "fraclab/weights.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

struct InequalityParams {
    double delta = 0.5;   // in [0,1)
    double p = 1.0;       // >= 1
    double q = 1.0;       // >= 1
    double alpha = 0.0;   // fractional maximal exponent
    double r = 1.0;       // Muckenhoupt index, 1 <= r <= p
    double s = 1.0;       // slack exponent, > 0
    double epsilon = 0.0; // optimal-exponent probe shift, >= 0
};

enum class TheoremId {
    Wfp,
    WfpLorentz,
    Growth,
    OneP,
    SelfBad,
    SelfGood,
    Trunc,
    Riesz,
    Frac2Grad,
    Frac2GradA1,
    Wcp,
};

std::string theoremName(TheoremId id);
TheoremId theoremFromName(const std::string& name);

struct CheckReport {
    std::string theorem;
    int n = 1;
    int m = 0;
    InequalityParams params;
    double lhs = 0.0;
    double rhsCore = 0.0;
    double empiricalConstant = 0.0;
    std::optional<double> explicitConstant;
    std::optional<bool> passExplicit;
    // estimated weight constants substituted on the right side; the check
    // validates the inequality shape, not the cited constant chain
    bool conditional = false;
    double runtimeMs = 0.0;
};

/// Computes lhs, constant-free rhs and the empirical constant for one
/// inequality instance. mu is required for measure-based ids, w for
/// weight-based ids.
CheckReport check(TheoremId id, const ScalarField& f, const CellMeasure* mu, const WeightField* w,
                  const InequalityParams& params);

/// (c*, value) minimizing the L^q (strong) or weak-L^q norm of f - c against
/// the normalized measure.
std::pair<double, double> optimizeCenter(const ScalarField& f, const CellMeasure& weight, double q,
                                         bool weak);

enum class CexFamily { PqClassical, PqFractional, AlphaClassical, AlphaFractional };
enum class CexEngine { Grid, Radial };

std::string familyName(CexFamily f);
CexFamily familyFromName(const std::string& name);

struct CounterexampleRow {
    int k = 0;
    double lhsLower = 0.0;
    double rhsUpper = 0.0;
    double ratio = 0.0;
};

/// Blow-up table for the truncated-logarithm family on the centered cube of
/// side 1/sqrt(n). Lower bound on the oscillation side, closed-form upper
/// bound on the gradient side; ratio diverging in k disproves a uniform
/// constant. gridDepth is used by the grid engine only.
std::vector<CounterexampleRow> runCounterexample(CexFamily family, int n, int kMin, int kMax,
                                                 const InequalityParams& params, CexEngine engine,
                                                 int gridDepth = 10);

/// One report per grid depth.
std::vector<std::pair<int, CheckReport>> convergeStudy(
    const std::function<CheckReport(int)>& runAtDepth, const std::vector<int>& mList);

} // namespace fraclab
