#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/dyadic.hpp"

#include <cmath>
#include <random>

using namespace fraclab;

TEST_CASE("dyadic enumeration") {
    auto sq = enumerateDyadic(Cube::unit(2), 1);
    CHECK(sq.size() == 4);
    for (const auto& c : sq) CHECK(c.side() == doctest::Approx(0.5));

    auto one = enumerateDyadic(Cube::unit(3), 0);
    CHECK(one.size() == 1);
    CHECK(one[0].cube().side == doctest::Approx(1.0));

    auto iv = enumerateDyadic(Cube::unit(1), 2);
    REQUIRE(iv.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(iv[size_t(i)].cube().corner[0] == doctest::Approx(0.25 * i));
}

TEST_CASE("box sums match direct loops") {
    std::mt19937_64 rng(7);
    for (int dim = 1; dim <= 3; ++dim) {
        Grid g(Cube::unit(dim), 3);
        std::vector<double> data(size_t(g.cellCount()));
        for (double& v : data) v = double(rng() % 1000) / 100.0;
        BoxSums sums(g, data);
        for (int trial = 0; trial < 50; ++trial) {
            std::array<int, 3> lo{0, 0, 0}, hi{1, 1, 1};
            for (int d = 0; d < dim; ++d) {
                int a = int(rng() % 8), b = int(rng() % 8);
                lo[d] = std::min(a, b);
                hi[d] = std::max(a, b) + 1;
            }
            double direct = 0.0;
            std::array<int, 3> ix = lo;
            for (;;) {
                direct += data[size_t(g.index(ix))];
                int d = 0;
                for (; d < dim; ++d) {
                    if (++ix[d] < hi[d]) break;
                    ix[d] = lo[d];
                }
                if (d == dim) break;
            }
            CHECK(sums.sum(lo, hi) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

namespace {

CellSet prefixSet(const Grid& g, double cut) {
    CellSet E(g);
    for (int64_t i = 0; i < E.size(); ++i) E.set(i, g.center(i)[0] < cut);
    return E;
}

} // namespace

TEST_CASE("stopping-time decomposition hand traces") {
    Grid g(Cube::unit(1), 4);

    CellSet empty(g);
    CHECK(czDecompose(empty, 0.5).members.empty());

    // E = [0, 1/4]: the half [0, 1/2] is the first cube whose density 1/2
    // exceeds the threshold lambda/2 = 1/4
    CubeFamily fam = czDecompose(prefixSet(g, 0.25), 0.5);
    REQUIRE(fam.members.size() == 1);
    CHECK(fam.members[0].lo[0] == 0);
    CHECK(fam.members[0].width == g.cellsPerAxis / 2);

    // E = [0, 1/8]: selection happens two generations down, at [0, 1/4]
    CubeFamily fam2 = czDecompose(prefixSet(g, 0.125), 0.5);
    REQUIRE(fam2.members.size() == 1);
    CHECK(fam2.members[0].lo[0] == 0);
    CHECK(fam2.members[0].width == g.cellsPerAxis / 4);
}

TEST_CASE("decomposition properties on random sets") {
    std::mt19937_64 rng(11);
    for (int dim = 1; dim <= 3; ++dim) {
        Grid g(Cube::unit(dim), dim == 3 ? 3 : 4);
        int64_t total = g.cellCount();
        for (int trial = 0; trial < 60; ++trial) {
            double lambda = 0.05 + 0.9 * double(rng() % 1000) / 1000.0;
            CellSet E(g);
            int64_t cap = int64_t(std::floor(lambda * double(total)));
            // fill E up to the precondition |E| <= lambda |Q|
            int64_t want = cap > 0 ? int64_t(rng() % uint64_t(cap + 1)) : 0;
            while (E.count() < want) E.set(int64_t(rng() % uint64_t(total)), true);

            CubeFamily fam = czDecompose(E, lambda);
            CHECK(pairwiseDisjoint(fam));
            std::vector<uint8_t> covered(size_t(total), 0);
            int64_t thrNum = 1; // 2^n
            for (int d = 0; d < dim; ++d) thrNum *= 2;
            for (const CellBox& b : fam.members) {
                int64_t cubeCells = b.cells(dim);
                int64_t cnt = 0;
                std::array<int, 3> ix = b.lo;
                for (int64_t c = 0; c < cubeCells; ++c) {
                    int64_t idx = g.index(ix);
                    covered[size_t(idx)] = 1;
                    if (E.contains(idx)) ++cnt;
                    for (int d = 0; d < dim; ++d) {
                        if (++ix[d] < b.lo[d] + b.width) break;
                        ix[d] = b.lo[d];
                    }
                }
                // density > lambda / 2^n and <= lambda, exact on counts
                CHECK(double(cnt) * double(thrNum) > lambda * double(cubeCells));
                CHECK(double(cnt) <= lambda * double(cubeCells) * (1.0 + 1e-12));
            }
            for (int64_t i = 0; i < total; ++i)
                if (E.contains(i)) CHECK(covered[size_t(i)] == 1);
        }
    }
}

TEST_CASE("dyadic maximal function") {
    Grid g(Cube::unit(1), 4);
    CellMeasure leb(g, g.cellVolume());
    ScalarField m0 = dyadicFractionalMaximal(leb, 0.0);
    for (int64_t i = 0; i < m0.size(); ++i) CHECK(m0[i] == doctest::Approx(1.0));

    Grid g2(Cube(1, {0.0, 0.0, 0.0}, 2.0), 3);
    CellMeasure leb2(g2, g2.cellVolume());
    ScalarField ma = dyadicFractionalMaximal(leb2, 0.5);
    for (int64_t i = 0; i < ma.size(); ++i)
        CHECK(ma[i] == doctest::Approx(std::sqrt(2.0))); // coarsest cube wins

    Grid g4(Cube::unit(1), 2);
    CellMeasure single(g4, 0.0);
    single[0] = 1.0;
    ScalarField ms = dyadicFractionalMaximal(single, 0.0);
    CHECK(ms[0] == doctest::Approx(4.0));
    CHECK(ms[1] == doctest::Approx(2.0));
    CHECK(ms[2] == doctest::Approx(1.0));
    CHECK(ms[3] == doctest::Approx(1.0));
}

TEST_CASE("global maximal function") {
    Grid g(Cube::unit(1), 4);
    CellMeasure leb(g, g.cellVolume());
    for (MaximalMode mode : {MaximalMode::Brute, MaximalMode::Shifted}) {
        ScalarField m = globalFractionalMaximal(leb, 0.0, mode);
        for (int64_t i = 0; i < m.size(); ++i) CHECK(m[i] == doctest::Approx(1.0));
    }

    CellMeasure single(g, 0.0);
    single[0] = 1.0;
    ScalarField mb = globalFractionalMaximal(single, 0.0, MaximalMode::Brute);
    double h = g.cellWidth;
    for (int64_t j = 0; j < mb.size(); ++j)
        CHECK(mb[j] == doctest::Approx(1.0 / (double(j + 1) * h)));
}

TEST_CASE("maximal function comparisons") {
    std::mt19937_64 rng(23);
    for (int dim = 1; dim <= 2; ++dim) {
        Grid g(Cube::unit(dim), dim == 1 ? 6 : 5);
        for (double alpha : {0.0, 0.5}) {
            CellMeasure mu(g, 0.0);
            for (int64_t i = 0; i < mu.size(); ++i)
                mu[i] = (rng() % 4 == 0) ? double(1 + rng() % 10) : 0.0;
            ScalarField dy = dyadicFractionalMaximal(mu, alpha);
            ScalarField br = globalFractionalMaximal(mu, alpha, MaximalMode::Brute);
            ScalarField sh = globalFractionalMaximal(mu, alpha, MaximalMode::Shifted);
            double bound = std::pow(6.0, dim - alpha);
            for (int64_t i = 0; i < mu.size(); ++i) {
                CHECK(dy[i] <= br[i] * (1.0 + 1e-12));
                CHECK(sh[i] <= br[i] * (1.0 + 1e-12));
                CHECK(br[i] <= bound * sh[i] * (1.0 + 1e-12));
            }

            // monotone and 1-homogeneous in the measure
            CellMeasure mu2 = mu;
            for (int64_t i = 0; i < mu2.size(); ++i) mu2[i] *= 3.0;
            ScalarField dy2 = dyadicFractionalMaximal(mu2, alpha);
            for (int64_t i = 0; i < mu.size(); ++i)
                CHECK(dy2[i] == doctest::Approx(3.0 * dy[i]));

            // exponent shift: M_alpha <= side^eps M_{alpha-eps} with side 1
            if (alpha > 0.0) {
                ScalarField dyLow = dyadicFractionalMaximal(mu, 0.0);
                for (int64_t i = 0; i < mu.size(); ++i)
                    CHECK(dy[i] <= dyLow[i] * (1.0 + 1e-12));
            }
        }
    }
}
