#include "fraclab/lattice.hpp"
#include "fraclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraclab {

double integrate(const ScalarField& field, const CellMeasure* mu, const CellSet* region) {
    if (mu) requireSameGrid(field.grid, mu->grid, "integrate");
    if (region) requireSameGrid(field.grid, region->grid, "integrate");
    double hv = field.grid.cellVolume();
    KahanSum acc;
    for (int64_t i = 0; i < field.size(); ++i) {
        if (region && !region->contains(i)) continue;
        acc.add(field[i] * (mu ? (*mu)[i] : hv));
    }
    double v = acc.value();
    if (!std::isfinite(v)) throw std::domain_error("integrate: non-finite accumulation");
    return v;
}

double average(const ScalarField& field, const CellSet* region) {
    int64_t cells = region ? region->count() : field.size();
    if (cells == 0) throw std::invalid_argument("average: empty region");
    double vol = double(cells) * field.grid.cellVolume();
    return integrate(field, nullptr, region) / vol;
}

ScalarField gradientMagnitude(const ScalarField& field) {
    const Grid& g = field.grid;
    if (g.cellsPerAxis < 2) throw std::invalid_argument("gradientMagnitude: N must be >= 2");
    ScalarField out(g);
    int n = g.dim();
    int N = g.cellsPerAxis;
    double h = g.cellWidth;
    for (int64_t i = 0; i < field.size(); ++i) {
        auto ix = g.coords(i);
        double s = 0.0;
        for (int d = 0; d < n; ++d) {
            int64_t stride = 1;
            for (int dd = 0; dd < d; ++dd) stride *= N;
            double diff;
            if (ix[d] == 0)
                diff = (field[i + stride] - field[i]) / h;
            else if (ix[d] == N - 1)
                diff = (field[i] - field[i - stride]) / h;
            else
                diff = (field[i + stride] - field[i - stride]) / (2.0 * h);
            s += diff * diff;
        }
        out[i] = std::sqrt(s);
    }
    return out;
}

CellSet levelSet(const ScalarField& field, double lambda, LevelDirection dir) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("levelSet: lambda not finite");
    CellSet s(field.grid);
    for (int64_t i = 0; i < field.size(); ++i)
        s.set(i, dir == LevelDirection::Above ? field[i] > lambda : field[i] < lambda);
    return s;
}

double maximalMedian(const ScalarField& field, const CellSet* region) {
    std::vector<double> vals;
    vals.reserve(size_t(field.size()));
    for (int64_t i = 0; i < field.size(); ++i)
        if (!region || region->contains(i)) vals.push_back(field[i]);
    if (vals.empty()) throw std::invalid_argument("maximalMedian: empty region");
    std::sort(vals.begin(), vals.end());
    // All cells carry equal volume, so |{f > a}| < |A|/2 becomes a count
    // condition: number of values strictly above a must drop below M/2.
    // The infimum is attained at a cell value.
    int64_t M = int64_t(vals.size());
    for (size_t j = 0; j < vals.size(); ++j) {
        if (j + 1 < vals.size() && vals[j + 1] == vals[j]) continue;
        int64_t above = M - int64_t(j) - 1; // count of values > vals[j]
        if (2 * above < M) return vals[j];
    }
    return vals.back();
}

double norm(const ScalarField& field, const NormSpec& spec, const CellMeasure& mu) {
    requireSameGrid(field.grid, mu.grid, "norm");
    if (spec.exponent < 1.0) throw std::invalid_argument("norm: exponent must be >= 1");
    double q = spec.exponent;
    if (spec.kind == NormSpec::Kind::Lp) {
        KahanSum acc;
        for (int64_t i = 0; i < field.size(); ++i)
            acc.add(std::pow(std::abs(field[i] - spec.center), q) * mu[i]);
        return std::pow(acc.value(), 1.0 / q);
    }
    // Level decomposition over the finite set of distinct |f - c| values.
    std::vector<std::pair<double, double>> lv; // (level, mass)
    lv.reserve(size_t(field.size()));
    for (int64_t i = 0; i < field.size(); ++i)
        lv.emplace_back(std::abs(field[i] - spec.center), mu[i]);
    std::sort(lv.begin(), lv.end());
    double total = 0.0;
    for (auto& p : lv) total += p.second;
    if (!(total > 0.0)) throw std::invalid_argument("norm: zero-total normalizing measure");

    if (spec.kind == NormSpec::Kind::WeakLq) {
        // sup over t of t * (mu{|f-c| >= t} / total)^{1/q}; the sup over
        // continuous lambda of lambda * mu{> lambda}^{1/q} is attained as
        // lambda approaches a cell level from below.
        double tailMass = total;
        double best = 0.0;
        size_t j = 0;
        while (j < lv.size()) {
            double t = lv[j].first;
            if (t > 0.0) best = std::max(best, t * std::pow(tailMass / total, 1.0 / q));
            double levelMass = 0.0;
            while (j < lv.size() && lv[j].first == t) levelMass += lv[j++].second;
            tailMass -= levelMass;
        }
        return best;
    }
    // LorentzQ1: q * sum over intervals (t_i, t_{i+1}] of
    // (t_{i+1} - t_i) * mu{|f-c| >= t_{i+1}}^{1/q}
    KahanSum acc;
    double tailMass = total;
    double prev = 0.0;
    size_t j = 0;
    // skip zero levels (they do not contribute)
    while (j < lv.size() && lv[j].first == 0.0) tailMass -= lv[j++].second;
    while (j < lv.size()) {
        double t = lv[j].first;
        acc.add((t - prev) * std::pow(tailMass, 1.0 / q));
        double levelMass = 0.0;
        while (j < lv.size() && lv[j].first == t) levelMass += lv[j++].second;
        tailMass -= levelMass;
        prev = t;
    }
    return q * acc.value();
}

} // namespace fraclab
