#include "fraclab/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

ScalarField sampleField(const FieldSpec& spec, const Grid& grid) {
    using Kind = FieldSpec::Kind;
    ScalarField f(grid);
    int n = grid.dim();
    for (int64_t i = 0; i < f.size(); ++i) {
        Vec x = grid.center(i);
        double v = 0.0;
        switch (spec.kind) {
        case Kind::Linear:
            for (int d = 0; d < n; ++d) v += spec.direction[d] * x[d];
            break;
        case Kind::LogRadial: {
            double r = distance(x, spec.center, n);
            v = r > 0.0 ? std::min(-std::log(r), spec.truncation) : spec.truncation;
            break;
        }
        case Kind::RadialPower:
            v = std::pow(distance(x, spec.center, n), spec.exponent);
            break;
        case Kind::IndicatorSmoothed: {
            double r = distance(x, spec.center, n);
            if (r <= spec.radius)
                v = 1.0;
            else if (spec.ramp > 0.0 && r < spec.radius + spec.ramp)
                v = 1.0 - (r - spec.radius) / spec.ramp;
            else
                v = 0.0;
            break;
        }
        case Kind::Constant:
            v = spec.value;
            break;
        case Kind::Tabulated:
            if (int64_t(spec.table.size()) != f.size())
                throw std::invalid_argument("sampleField: table size mismatch");
            v = spec.table[size_t(i)];
            break;
        }
        if (!std::isfinite(v)) throw std::domain_error("sampleField: non-finite value");
        f[i] = v;
    }
    return f;
}

CellMeasure sampleMeasure(const MeasureSpec& spec, const Grid& grid) {
    using Kind = MeasureSpec::Kind;
    CellMeasure mu(grid);
    int n = grid.dim();
    double hv = grid.cellVolume();
    switch (spec.kind) {
    case Kind::Lebesgue:
        for (int64_t i = 0; i < mu.size(); ++i) mu[i] = hv;
        break;
    case Kind::NormalizedBall: {
        if (!(spec.radius > 0.0)) throw std::invalid_argument("sampleMeasure: radius <= 0");
        if (spec.radius < grid.cellWidth)
            throw std::invalid_argument("sampleMeasure: unresolved measure (ball smaller than one cell)");
        // ball volume sigma_n * rho^n
        static const double sigma[4] = {0.0, 2.0, M_PI, 4.0 * M_PI / 3.0};
        double ballVol = sigma[n] * std::pow(spec.radius, n);
        for (int64_t i = 0; i < mu.size(); ++i)
            if (distance(grid.center(i), spec.center, n) < spec.radius) mu[i] = hv / ballVol;
        break;
    }
    case Kind::PowerDensity:
        for (int64_t i = 0; i < mu.size(); ++i) {
            double r = distance(grid.center(i), spec.center, n);
            double dens = r > 0.0 ? std::pow(r, -spec.exponent) : 0.0;
            if (!std::isfinite(dens)) throw std::domain_error("sampleMeasure: non-finite density");
            mu[i] = dens * hv;
        }
        break;
    case Kind::SingleCell:
        if (spec.cellIndex < 0 || spec.cellIndex >= mu.size())
            throw std::invalid_argument("sampleMeasure: cell index out of range");
        if (spec.cellMass < 0.0) throw std::invalid_argument("sampleMeasure: negative mass");
        mu[spec.cellIndex] = spec.cellMass;
        break;
    }
    return mu;
}

} // namespace fraclab
