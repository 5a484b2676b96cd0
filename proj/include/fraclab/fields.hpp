#pragma once

#include "fraclab/geometry.hpp"

#include <cstdint>
#include <vector>

namespace fraclab {

/// One real value per cell, sampled at the cell center.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(size_t(g.cellCount()), fill) {}

    double& operator[](int64_t i) { return values[size_t(i)]; }
    double operator[](int64_t i) const { return values[size_t(i)]; }
    int64_t size() const { return int64_t(values.size()); }
};

/// Nonnegative mass per cell; mu(cell) = mass.
struct CellMeasure {
    Grid grid;
    std::vector<double> mass;

    CellMeasure() = default;
    explicit CellMeasure(const Grid& g, double fill = 0.0)
        : grid(g), mass(size_t(g.cellCount()), fill) {}

    double& operator[](int64_t i) { return mass[size_t(i)]; }
    double operator[](int64_t i) const { return mass[size_t(i)]; }
    int64_t size() const { return int64_t(mass.size()); }
    double total() const {
        double s = 0.0;
        for (double v : mass) s += v;
        return s;
    }
};

/// Strictly positive density per cell.
struct WeightField {
    Grid grid;
    std::vector<double> density;

    WeightField() = default;
    explicit WeightField(const Grid& g, double fill = 1.0)
        : grid(g), density(size_t(g.cellCount()), fill) {}

    double& operator[](int64_t i) { return density[size_t(i)]; }
    double operator[](int64_t i) const { return density[size_t(i)]; }
    int64_t size() const { return int64_t(density.size()); }

    /// w-mass of the whole grid cube (density times cell volume).
    double totalMass() const {
        double s = 0.0;
        for (double v : density) s += v;
        return s * grid.cellVolume();
    }
    CellMeasure asMeasure() const {
        CellMeasure mu(grid);
        double hv = grid.cellVolume();
        for (int64_t i = 0; i < size(); ++i) mu[i] = density[size_t(i)] * hv;
        return mu;
    }
};

/// Boolean membership per cell.
struct CellSet {
    Grid grid;
    std::vector<uint8_t> member;

    CellSet() = default;
    explicit CellSet(const Grid& g, bool fill = false)
        : grid(g), member(size_t(g.cellCount()), fill ? 1 : 0) {}

    bool contains(int64_t i) const { return member[size_t(i)] != 0; }
    void set(int64_t i, bool v) { member[size_t(i)] = v ? 1 : 0; }
    int64_t size() const { return int64_t(member.size()); }
    int64_t count() const {
        int64_t c = 0;
        for (uint8_t v : member) c += v;
        return c;
    }
    double volume() const { return double(count()) * grid.cellVolume(); }
    CellSet complement() const {
        CellSet s(grid);
        for (size_t i = 0; i < member.size(); ++i) s.member[i] = member[i] ? 0 : 1;
        return s;
    }
};

// --- sampling catalogs ---

struct FieldSpec {
    enum class Kind { Linear, LogRadial, RadialPower, IndicatorSmoothed, Constant, Tabulated };
    Kind kind = Kind::Constant;
    Vec direction{1.0, 0.0, 0.0}; // Linear: f(x) = a . x
    Vec center{0.0, 0.0, 0.0};    // LogRadial / RadialPower / IndicatorSmoothed
    double truncation = 1.0;      // LogRadial: min(-log|x - c|, k)
    double exponent = 1.0;        // RadialPower: |x - c|^beta
    double radius = 0.5;          // IndicatorSmoothed: 1 inside, linear ramp of width `ramp`
    double ramp = 0.0;
    double value = 0.0; // Constant
    std::vector<double> table;

    static FieldSpec linear(Vec a) {
        FieldSpec s;
        s.kind = Kind::Linear;
        s.direction = a;
        return s;
    }
    static FieldSpec logRadial(double k, Vec c = {0, 0, 0}) {
        FieldSpec s;
        s.kind = Kind::LogRadial;
        s.truncation = k;
        s.center = c;
        return s;
    }
    static FieldSpec radialPower(double beta, Vec c = {0, 0, 0}) {
        FieldSpec s;
        s.kind = Kind::RadialPower;
        s.exponent = beta;
        s.center = c;
        return s;
    }
    static FieldSpec constant(double v) {
        FieldSpec s;
        s.kind = Kind::Constant;
        s.value = v;
        return s;
    }
    static FieldSpec indicatorSmoothed(Vec c, double radius, double ramp) {
        FieldSpec s;
        s.kind = Kind::IndicatorSmoothed;
        s.center = c;
        s.radius = radius;
        s.ramp = ramp;
        return s;
    }
};

struct MeasureSpec {
    enum class Kind { Lebesgue, NormalizedBall, PowerDensity, SingleCell };
    Kind kind = Kind::Lebesgue;
    Vec center{0.0, 0.0, 0.0}; // NormalizedBall / PowerDensity
    double radius = 0.5;       // NormalizedBall
    double exponent = 0.0;     // PowerDensity: density |x - c|^(-beta)
    int64_t cellIndex = 0;     // SingleCell
    double cellMass = 1.0;

    static MeasureSpec lebesgue() { return MeasureSpec{}; }
    static MeasureSpec normalizedBall(double rho, Vec c = {0, 0, 0}) {
        MeasureSpec s;
        s.kind = Kind::NormalizedBall;
        s.radius = rho;
        s.center = c;
        return s;
    }
    static MeasureSpec powerDensity(double beta, Vec c = {0, 0, 0}) {
        MeasureSpec s;
        s.kind = Kind::PowerDensity;
        s.exponent = beta;
        s.center = c;
        return s;
    }
    static MeasureSpec singleCell(int64_t idx, double mass = 1.0) {
        MeasureSpec s;
        s.kind = Kind::SingleCell;
        s.cellIndex = idx;
        s.cellMass = mass;
        return s;
    }
};

ScalarField sampleField(const FieldSpec& spec, const Grid& grid);
CellMeasure sampleMeasure(const MeasureSpec& spec, const Grid& grid);

} // namespace fraclab
