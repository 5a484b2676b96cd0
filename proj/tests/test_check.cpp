#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclab/check.hpp"

#include <cmath>

using namespace fraclab;

namespace {

ScalarField linearField(const Grid& g) { return sampleField(FieldSpec::linear({1.0, 0.0, 0.0}), g); }

} // namespace

TEST_CASE("main inequality closed form") {
    Grid g(Cube::unit(1), 10);
    ScalarField f = linearField(g);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
    InequalityParams p;
    p.delta = 0.5;
    p.q = 2.0;
    p.alpha = 0.0; // = n - q(n - delta)
    CheckReport r = check(TheoremId::Wfp, f, &leb, nullptr, p);
    CHECK(r.lhs == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(0.01));
    CHECK(r.rhsCore == doctest::Approx(4.0 / 3.0).epsilon(0.05));
    CHECK(r.empiricalConstant == doctest::Approx(0.2165).epsilon(0.05));
    CHECK_FALSE(r.passExplicit.has_value());

    // wrong alpha is a named constraint violation
    InequalityParams bad = p;
    bad.alpha = 0.3;
    CHECK_THROWS_WITH_AS(check(TheoremId::Wfp, f, &leb, nullptr, bad),
                         "check: constraint violated: alpha", std::invalid_argument);
}

TEST_CASE("classical weighted variant closed form") {
    Grid g(Cube::unit(1), 10);
    ScalarField f = linearField(g);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
    InequalityParams p;
    p.q = 1.0;
    p.alpha = 1.0; // = n - q(n - 1)
    CheckReport r = check(TheoremId::Wcp, f, &leb, nullptr, p);
    CHECK(r.lhs == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(r.rhsCore == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.empiricalConstant == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("Lorentz variant and the level-sum comparison") {
    Grid g(Cube::unit(1), 8);
    ScalarField f = linearField(g);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
    InequalityParams p;
    p.delta = 0.5;
    p.q = 2.0;
    p.alpha = 0.0;
    CheckReport strong = check(TheoremId::Wfp, f, &leb, nullptr, p);
    CheckReport lorentz = check(TheoremId::WfpLorentz, f, &leb, nullptr, p);
    // lhs_{Lq} <= 2 * integral of mu(level set)^{1/q}, the Cavalieri step
    CHECK(strong.lhs <= 2.0 / p.q * lorentz.lhs * (1.0 + 1e-12));
    CHECK(lorentz.rhsCore == doctest::Approx(strong.rhsCore));
}

TEST_CASE("growth-condition variant") {
    Grid g(Cube::unit(1), 8);
    ScalarField f = linearField(g);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
    InequalityParams p;
    p.delta = 0.5;
    p.q = 2.0;
    p.alpha = 0.0;
    CheckReport r = check(TheoremId::Growth, f, &leb, nullptr, p);
    // C_mu = 1 for Lebesgue at alpha = 0, so this matches the plain form
    CHECK(r.rhsCore == doctest::Approx(4.0 / 3.0).epsilon(0.05));
    CHECK(std::isfinite(r.empiricalConstant));
}

TEST_CASE("explicit Riesz bound") {
    Grid g(Cube::unit(1), 8);
    ScalarField f(g);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
    InequalityParams p;
    p.alpha = 0.5;
    CheckReport r = check(TheoremId::Riesz, f, &leb, nullptr, p);
    REQUIRE(r.passExplicit.has_value());
    CHECK(*r.passExplicit);
    CHECK(*r.explicitConstant == doctest::Approx(2.0 * std::sqrt(2.0)));
    // the worst pointwise ratio reaches at least the boundary value 2
    CHECK(r.lhs >= 1.9);
}

TEST_CASE("explicit fractional-to-gradient bound") {
    Grid g(Cube::unit(1), 10);
    ScalarField f = linearField(g);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
    InequalityParams p;
    p.delta = 0.5;
    p.p = 1.0;
    CheckReport r = check(TheoremId::Frac2Grad, f, &leb, nullptr, p);
    CHECK(r.lhs == doctest::Approx(8.0 / 3.0).epsilon(0.05));
    REQUIRE(r.passExplicit.has_value());
    CHECK(*r.passExplicit);

    // delta at or below (p-1)/p is rejected
    InequalityParams bad = p;
    bad.p = 2.0;
    bad.delta = 0.5;
    CHECK_THROWS(check(TheoremId::Frac2Grad, f, &leb, nullptr, bad));
}

TEST_CASE("truncation comparison") {
    Grid g(Cube::unit(1), 8);
    ScalarField f = linearField(g);
    WeightField w = makeWeight(WeightSpec::power(0.5), g);
    InequalityParams p;
    p.q = 2.0;
    CheckReport r = check(TheoremId::Trunc, f, nullptr, &w, p);
    REQUIRE(r.passExplicit.has_value());
    CHECK(*r.passExplicit);
    CHECK(r.lhs <= r.rhsCore * (1.0 + 1e-9));
}

TEST_CASE("conditional self-improvement shapes") {
    Grid g(Cube::unit(1), 7);
    ScalarField f = linearField(g);
    WeightField w = makeWeight(WeightSpec::constant(1.0), g);
    InequalityParams p;
    p.delta = 0.5;
    p.p = 1.0;
    p.r = 1.0;
    for (TheoremId id : {TheoremId::SelfBad, TheoremId::SelfGood}) {
        CheckReport r = check(id, f, nullptr, &w, p);
        CHECK(r.conditional);
        CHECK(std::isfinite(r.lhs));
        CHECK(std::isfinite(r.rhsCore));
        CHECK(r.params.q > p.p); // the improved exponent
    }

    CheckReport one = check(TheoremId::OneP, f, nullptr, &w, p);
    CHECK(one.conditional);
    CHECK(one.lhs == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(one.rhsCore == doctest::Approx(4.0 / 3.0).epsilon(0.12)); // m=7 is coarse
}

TEST_CASE("center optimization") {
    Grid g(Cube::unit(1), 8);
    CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);

    ScalarField f = linearField(g);
    auto [c, v] = optimizeCenter(f, leb, 2.0, false);
    CHECK(c == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(v == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(0.01));

    ScalarField half(g);
    for (int64_t i = 0; i < half.size(); ++i) half[i] = g.center(i)[0] < 0.5 ? 0.0 : 1.0;
    CHECK(optimizeCenter(half, leb, 1.0, false).second == doctest::Approx(0.5).epsilon(1e-6));

    ScalarField cf = sampleField(FieldSpec::constant(3.0), g);
    auto [cc, cv] = optimizeCenter(cf, leb, 2.0, false);
    CHECK(cc == 3.0);
    CHECK(cv == 0.0);

    // weak objective stays below the strong one at the same center count
    auto weak = optimizeCenter(f, leb, 2.0, true);
    CHECK(weak.second <= v * (1.0 + 1e-9));
}

TEST_CASE("blow-up tables") {
    InequalityParams p;
    p.p = 1.5;
    p.q = 1.5;
    auto table = runCounterexample(CexFamily::PqClassical, 2, 2, 5, p, CexEngine::Radial);
    REQUIRE(table.size() == 4);
    for (size_t i = 1; i < table.size(); ++i) CHECK(table[i].ratio > table[i - 1].ratio);

    InequalityParams pa;
    pa.q = 1.0;
    pa.epsilon = 0.5;
    auto ta = runCounterexample(CexFamily::AlphaClassical, 2, 2, 5, pa, CexEngine::Radial);
    for (size_t i = 1; i < ta.size(); ++i) CHECK(ta[i].ratio > ta[i - 1].ratio);

    // parameter constraints
    InequalityParams bad;
    bad.p = 3.0; // p >= n
    CHECK_THROWS(runCounterexample(CexFamily::PqClassical, 2, 2, 4, bad, CexEngine::Radial));
}

TEST_CASE("depth study plumbing") {
    Grid g1(Cube::unit(1), 4);
    auto runAt = [](int m) {
        Grid g(Cube::unit(1), m);
        ScalarField f = sampleField(FieldSpec::linear({1.0, 0.0, 0.0}), g);
        CellMeasure leb = sampleMeasure(MeasureSpec::lebesgue(), g);
        InequalityParams p;
        p.delta = 0.5;
        p.q = 2.0;
        p.alpha = 0.0;
        return check(TheoremId::Wfp, f, &leb, nullptr, p);
    };
    auto table = convergeStudy(runAt, {4, 6, 8});
    REQUIRE(table.size() == 3);
    CHECK(table[2].second.empiricalConstant == doctest::Approx(0.2165).epsilon(0.05));
    CHECK_THROWS(convergeStudy(runAt, {6, 4}));
}
