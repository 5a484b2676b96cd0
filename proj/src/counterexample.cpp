#include "fraclab/check.hpp"
#include "fraclab/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

namespace {

double sigmaBall(int n) {
    static const double sigma[4] = {0.0, 2.0, M_PI, 4.0 * M_PI / 3.0};
    return sigma[n];
}

// Closed-form upper bound for the fractional maximal function of the
// normalized ball measure of radius e^{-k} at distance r from the origin.
// Any cube containing x and touching the ball has side at least
// (r - e^{-k})/sqrt(n); the candidate value side^{beta-n} min(1, mass ratio)
// peaks where the mass ratio saturates.
double maximalBound(double r, int n, double beta, int k) {
    double rho = std::exp(double(-k));
    double ballVol = sigmaBall(n) * std::pow(rho, n);
    double ellStar = std::pow(ballVol, 1.0 / n);
    double ellMin = std::max(0.0, r - rho) / std::sqrt(double(n));
    double ell = std::max(ellMin, ellStar);
    return std::pow(ell, beta - n) * std::min(1.0, std::pow(ell, n) / ballVol);
}

// c = integral of |log|x|| over the centered cube of side 1/sqrt(n),
// by the midpoint rule (exact 1-D antiderivative in dimension 1)
double oscillationConstant(int n) {
    double L = 1.0 / std::sqrt(double(n));
    if (n == 1) {
        double t = L / 2.0;
        return 2.0 * t * (1.0 - std::log(t));
    }
    int R = n == 2 ? 2048 : 200;
    double h = L / R;
    int64_t points = 1;
    for (int d = 0; d < n; ++d) points *= R;
    double cellVol = std::pow(h, n);
    double total = parallelReduce((points + 65535) / 65536, [&](int64_t tile) {
        int64_t i0 = tile * 65536;
        int64_t i1 = std::min(i0 + 65536, points);
        KahanSum acc;
        for (int64_t i = i0; i < i1; ++i) {
            int64_t t = i;
            double r2 = 0.0;
            for (int d = 0; d < n; ++d) {
                double x = -L / 2.0 + (double(t % R) + 0.5) * h;
                t /= R;
                r2 += x * x;
            }
            acc.add(std::abs(0.5 * std::log(r2)));
        }
        return acc.value() * cellVol;
    });
    return total;
}

} // namespace

std::string familyName(CexFamily f) {
    switch (f) {
    case CexFamily::PqClassical: return "PQ-CLASSICAL";
    case CexFamily::PqFractional: return "PQ-FRACTIONAL";
    case CexFamily::AlphaClassical: return "ALPHA-CLASSICAL";
    case CexFamily::AlphaFractional: return "ALPHA-FRACTIONAL";
    }
    throw std::logic_error("familyName");
}

CexFamily familyFromName(const std::string& name) {
    for (CexFamily f : {CexFamily::PqClassical, CexFamily::PqFractional,
                        CexFamily::AlphaClassical, CexFamily::AlphaFractional})
        if (familyName(f) == name) return f;
    throw std::invalid_argument("unknown counterexample family: " + name);
}

std::vector<CounterexampleRow> runCounterexample(CexFamily family, int n, int kMin, int kMax,
                                                 const InequalityParams& params, CexEngine engine,
                                                 int gridDepth) {
    if (n < 1 || n > 3) throw std::invalid_argument("runCounterexample: n in {1,2,3}");
    if (kMin < 1 || kMax < kMin) throw std::invalid_argument("runCounterexample: bad k range");
    double p = params.p;
    double q = params.q;
    double delta = params.delta;
    double eps = params.epsilon;
    double L = 1.0 / std::sqrt(double(n));

    // per-family parameter constraints and bound assembly
    double alpha, betaExp, gradExp, outerExp, chain = 1.0;
    bool rootP = false;
    switch (family) {
    case CexFamily::PqClassical: {
        if (!(p > 1.0 && p < n)) throw std::invalid_argument("runCounterexample: 1 < p < n");
        if (!(q >= p && q <= n * p / (n - p) + 1e-12))
            throw std::invalid_argument("runCounterexample: p <= q <= np/(n-p)");
        alpha = n - (q / p) * (n - p);
        betaExp = alpha;
        gradExp = p;
        outerExp = p / q;
        rootP = true;
        break;
    }
    case CexFamily::PqFractional: {
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("runCounterexample: delta");
        double pCap = std::min(double(n) / delta, 1.0 / (1.0 - delta));
        if (!(p > 1.0 && p < pCap))
            throw std::invalid_argument("runCounterexample: 1 < p < min(n/delta, 1/(1-delta))");
        if (!(q >= p && q <= n * p / (n - delta * p) + 1e-12))
            throw std::invalid_argument("runCounterexample: p <= q <= np/(n-delta p)");
        alpha = n - (q / p) * (n - delta * p);
        betaExp = alpha;
        gradExp = p;
        outerExp = p / q;
        rootP = true;
        // weighted fractional form bounded through the gradient term with
        // the A_1 weight (M_alpha mu)^{p/q}
        double bb = (1.0 - delta) * p;
        double a1Bound = std::pow(15.0, n) * 4.0 * n / (p * delta);
        chain = (1.0 - delta) * std::pow(2.0, n - bb) * n / bb * std::pow(L, bb) / (1.0 - bb) *
                a1Bound;
        break;
    }
    case CexFamily::AlphaClassical: {
        if (!(q >= 1.0 && (n == 1 || q <= double(n) / (n - 1) + 1e-12)))
            throw std::invalid_argument("runCounterexample: 1 <= q <= n/(n-1)");
        if (!(eps > 0.0)) throw std::invalid_argument("runCounterexample: epsilon > 0");
        alpha = n - q * (n - 1);
        betaExp = alpha + eps;
        gradExp = 1.0;
        outerExp = 1.0 / q;
        chain = std::pow(double(n), eps / (2.0 * q)); // 1/side^{eps/q}
        break;
    }
    case CexFamily::AlphaFractional: {
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("runCounterexample: delta");
        if (!(q >= 1.0 && q <= double(n) / (n - delta) + 1e-12))
            throw std::invalid_argument("runCounterexample: 1 <= q <= n/(n-delta)");
        if (!(eps > 0.0)) throw std::invalid_argument("runCounterexample: epsilon > 0");
        alpha = n - q * (n - delta);
        betaExp = alpha + eps;
        gradExp = 1.0;
        outerExp = 1.0 / q;
        double a1Bound =
            std::pow(15.0, n) * 4.0 * n / (delta + (double(n) - delta) * eps / (double(n) - alpha));
        // (1-delta) * fractional form <= chain * gradient term, times the
        // side^{-eps/q} probe factor
        chain = std::pow(2.0, n - (1.0 - delta)) * n * std::pow(L, 1.0 - delta) / delta * a1Bound *
                std::pow(double(n), eps / (2.0 * q));
        break;
    }
    }

    double c = oscillationConstant(n);
    std::vector<CounterexampleRow> table;

    for (int k = kMin; k <= kMax; ++k) {
        double rho = std::exp(double(-k));
        auto integrand = [&](double r) {
            if (r < rho || r >= 1.0) return 0.0;
            return std::pow(r, -gradExp) * std::pow(maximalBound(r, n, betaExp, k), outerExp);
        };
        double integral;
        if (engine == CexEngine::Radial) {
            // n sigma_n int_0^1 integrand(r) r^{n-1} dr by the midpoint rule
            int panels = 100000;
            double dr = 1.0 / panels;
            KahanSum acc;
            for (int i = 0; i < panels; ++i) {
                double r = (i + 0.5) * dr;
                acc.add(integrand(r) * std::pow(r, n - 1));
            }
            integral = n * sigmaBall(n) * acc.value() * dr;
        } else {
            // midpoint sum of the same integrand over a grid on the
            // enclosing cube of the unit ball
            Grid g(Cube::centered(n, 2.0), gridDepth);
            if (rho < 4.0 * g.cellWidth)
                throw std::invalid_argument("runCounterexample: unresolved ball in grid engine");
            Vec origin{0.0, 0.0, 0.0};
            int64_t cells = g.cellCount();
            double hv = g.cellVolume();
            double total = parallelReduce((cells + 65535) / 65536, [&](int64_t tile) {
                int64_t i0 = tile * 65536;
                int64_t i1 = std::min(i0 + 65536, cells);
                KahanSum acc;
                for (int64_t i = i0; i < i1; ++i)
                    acc.add(integrand(distance(g.center(i), origin, n)));
                return acc.value();
            });
            integral = total * hv;
        }
        double bound = chain * integral;
        if (rootP) bound = std::pow(bound, 1.0 / p);
        CounterexampleRow row;
        row.k = k;
        row.lhsLower = double(k) - c;
        row.rhsUpper = bound;
        row.ratio = bound > 0.0 ? row.lhsLower / bound : 0.0;
        table.push_back(row);
    }
    return table;
}

} // namespace fraclab
