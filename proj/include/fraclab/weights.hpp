#pragma once

#include "fraclab/dyadic.hpp"

#include <functional>
#include <optional>
#include <string>

namespace fraclab {

struct WeightSpec {
    enum class Kind { Constant, Power, Maximal };
    Kind kind = Kind::Constant;
    double value = 1.0;   // Constant
    double beta = 0.0;    // Power: |x - gridCenter|^beta, beta > -n
    MeasureSpec measure;  // Maximal base measure
    double alpha = 0.0;   // Maximal
    double t = 1.0;       // Maximal: pointwise power, in (0,1]

    static WeightSpec constant(double v) {
        WeightSpec s;
        s.value = v;
        return s;
    }
    static WeightSpec power(double beta) {
        WeightSpec s;
        s.kind = Kind::Power;
        s.beta = beta;
        return s;
    }
    static WeightSpec maximal(const MeasureSpec& mu, double alpha, double t) {
        WeightSpec s;
        s.kind = Kind::Maximal;
        s.measure = mu;
        s.alpha = alpha;
        s.t = t;
        return s;
    }
};

WeightField makeWeight(const WeightSpec& spec, const Grid& grid);

/// Muckenhoupt constant estimates over dyadic subcubes plus their one-third
/// shifts. All three are lower bounds of the continuum constants.
struct WeightReport {
    double a1 = 1.0;
    double ap = 1.0;
    double ainf = 1.0;
    std::string method;
};

WeightReport apConstant(const WeightField& w, double p);

/// (1-delta)^{1/p} delta^{1/p-1} side^delta
/// ((1/w(Q)) * weighted Gagliardo form of f)^{1/p}.
double functionalAf(const ScalarField& f, const WeightField& w, double delta, double p);

/// Sources of disjoint dyadic families for the D_p / SD_p^s estimation.
struct FamilySource {
    enum class Kind { Cz, Random, CoarseExhaustive };
    Kind kind = Kind::Random;
    const ScalarField* f = nullptr;  // Cz: level sets of f
    std::vector<double> lambdas;     // Cz levels in (0,1)
    int count = 100;                 // Random
    uint64_t seed = 1;               // Random
    int maxGen = 2;                  // Random / CoarseExhaustive
};

/// max over generated families {Q_i} of
/// (sum a(Q_i)^p w(Q_i)/w(Q))^{1/p} / a(Q), the SD variant divided by
/// (|union Q_i|/|Q|)^{1/s}. A lower bound of the true supremum.
double dpSdConstant(const std::function<double(const CellBox&)>& a, const WeightField& w, double p,
                    std::optional<double> s, const FamilySource& source);

} // namespace fraclab
