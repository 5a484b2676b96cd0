#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/weights.hpp"
#include "fraclab/kernels.hpp"

#include <cmath>

using namespace fraclab;

TEST_CASE("weight construction") {
    Grid g(Cube::unit(1), 4);
    WeightField one = makeWeight(WeightSpec::constant(1.0), g);
    for (int64_t i = 0; i < one.size(); ++i) CHECK(one[i] == 1.0);
    CHECK_THROWS(makeWeight(WeightSpec::constant(0.0), g));

    // power weight |x - center|^beta at cell centers
    Grid gc(Cube(1, {-1.0, 0.0, 0.0}, 2.0), 4);
    WeightField pw = makeWeight(WeightSpec::power(0.5), gc);
    for (int64_t i = 0; i < pw.size(); ++i)
        CHECK(pw[i] == doctest::Approx(std::sqrt(std::abs(gc.center(i)[0]))));
    CHECK_THROWS(makeWeight(WeightSpec::power(-1.5), gc)); // beta <= -n

    WeightField mw = makeWeight(WeightSpec::maximal(MeasureSpec::lebesgue(), 0.0, 1.0), g);
    for (int64_t i = 0; i < mw.size(); ++i) CHECK(mw[i] == doctest::Approx(1.0));
}

TEST_CASE("Muckenhoupt estimates") {
    Grid g(Cube::unit(1), 6);
    WeightField one = makeWeight(WeightSpec::constant(1.0), g);
    WeightReport r1 = apConstant(one, 2.0);
    CHECK(r1.a1 == doctest::Approx(1.0));
    CHECK(r1.ap == doctest::Approx(1.0));
    CHECK(r1.ainf == doctest::Approx(1.0));

    // |x|^{1/2} on [-1,1]: every interval touching 0 yields the product 4/3
    Grid gc(Cube(1, {-1.0, 0.0, 0.0}, 2.0), 10);
    WeightField pw = makeWeight(WeightSpec::power(0.5), gc);
    WeightReport rp = apConstant(pw, 2.0);
    CHECK(rp.ap == doctest::Approx(4.0 / 3.0).epsilon(0.05));

    // two-valued weight: the root cube dominates, product 25/16
    WeightField tv(g);
    for (int64_t i = 0; i < tv.size(); ++i) tv[i] = g.center(i)[0] < 0.5 ? 1.0 : 4.0;
    CHECK(apConstant(tv, 2.0).ap == doctest::Approx(25.0 / 16.0).epsilon(1e-9));

    // scale invariance and monotonicity in p over the same cube family
    WeightField tv3 = tv;
    for (int64_t i = 0; i < tv3.size(); ++i) tv3[i] *= 3.0;
    CHECK(apConstant(tv3, 2.0).ap == doctest::Approx(apConstant(tv, 2.0).ap).epsilon(1e-12));
    CHECK(apConstant(tv, 3.0).ap <= apConstant(tv, 2.0).ap * (1.0 + 1e-12));
    CHECK(apConstant(tv, 2.0).ap <= apConstant(tv, 1.5).ap * (1.0 + 1e-12));
}

TEST_CASE("oscillation functional") {
    Grid g(Cube::unit(1), 10);
    WeightField one = makeWeight(WeightSpec::constant(1.0), g);
    ScalarField lin = sampleField(FieldSpec::linear({1.0, 0.0, 0.0}), g);
    // (1-d) * d^0 * side^d * (form / w(Q)) at d=1/2, p=1: (1/2)(8/3) = 4/3
    CHECK(functionalAf(lin, one, 0.5, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(0.05));

    ScalarField c = sampleField(FieldSpec::constant(2.0), g);
    CHECK(functionalAf(c, one, 0.5, 1.0) == 0.0);

    // homogeneity: the value is w(Q)-normalized
    WeightField two = makeWeight(WeightSpec::constant(2.0), g);
    CHECK(functionalAf(lin, two, 0.5, 1.0) ==
          doctest::Approx(functionalAf(lin, one, 0.5, 1.0)).epsilon(1e-12));
}

TEST_CASE("disjoint-family functional condition") {
    Grid g(Cube::unit(1), 4);
    WeightField one = makeWeight(WeightSpec::constant(1.0), g);
    double hv = g.cellVolume();

    // a(Q) = |Q|^{1/2}, p = 2: the best generation-1 family is both halves,
    // value (2 * (1/2) * (1/2))^{1/2} = sqrt(1/2)
    auto a = [&](const CellBox& b) { return std::sqrt(double(b.cells(1)) * hv); };
    FamilySource src;
    src.kind = FamilySource::Kind::CoarseExhaustive;
    src.maxGen = 1;
    CHECK(dpSdConstant(a, one, 2.0, std::nullopt, src) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    // SD variant agrees with the plain one on full partitions
    CHECK(dpSdConstant(a, one, 2.0, 3.0, src) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    // a == 1: any full partition reproduces ratio 1
    auto aOne = [](const CellBox&) { return 1.0; };
    CHECK(dpSdConstant(aOne, one, 2.0, std::nullopt, src) == doctest::Approx(1.0));

    // random families stay below the exhaustive bound at the same generation
    FamilySource rnd;
    rnd.kind = FamilySource::Kind::Random;
    rnd.count = 50;
    rnd.seed = 5;
    rnd.maxGen = 1;
    CHECK(dpSdConstant(a, one, 2.0, std::nullopt, rnd) <= std::sqrt(0.5) + 1e-12);
}
