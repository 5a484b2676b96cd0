#pragma once

#include "fraclab/fields.hpp"

#include <optional>

namespace fraclab {

enum class LevelDirection { Above, Below };

/// Integral of `field` against `mu` (or Lebesgue when mu is null), restricted
/// to `region` (whole cube when null).
double integrate(const ScalarField& field, const CellMeasure* mu = nullptr,
                 const CellSet* region = nullptr);

/// Integral average f_A over `region` (whole cube when null), Lebesgue.
double average(const ScalarField& field, const CellSet* region = nullptr);

/// Per-cell Euclidean norm of the central-difference gradient; one-sided
/// differences at boundary cells.
ScalarField gradientMagnitude(const ScalarField& field);

/// Strict-inequality level set {f > lambda} (or {f < lambda}).
CellSet levelSet(const ScalarField& field, double lambda, LevelDirection dir);

/// m_f(A) = inf { a : |{f > a}| < |A|/2 }, exact over the finite cell values.
double maximalMedian(const ScalarField& field, const CellSet* region = nullptr);

struct NormSpec {
    enum class Kind { Lp, WeakLq, LorentzQ1 };
    Kind kind = Kind::Lp;
    double exponent = 1.0; // p or q
    double center = 0.0;   // c in |f - c|
};

/// Lp:        ( int |f-c|^p dmu )^{1/p}
/// WeakLq:    sup_t t * ( mu{|f-c| >= t} / mu(total) )^{1/q}, t over cell levels
/// LorentzQ1: q * int_0^inf mu{|f-c| > t}^{1/q} dt, exact piecewise evaluation
double norm(const ScalarField& field, const NormSpec& spec, const CellMeasure& mu);

} // namespace fraclab
