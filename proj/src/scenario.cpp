#include "fraclab/scenario.hpp"
#include "fraclab/lattice.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace fraclab {

namespace {

double numberField(const json& j, const char* name, double fallback, bool required = false) {
    if (!j.contains(name)) {
        if (required) throw ScenarioError(std::string("missing field: ") + name);
        return fallback;
    }
    if (!j[name].is_number()) throw ScenarioError(std::string("field not a number: ") + name);
    return j[name].get<double>();
}

Vec vecField(const json& j, const char* name, int dim) {
    Vec v{0.0, 0.0, 0.0};
    if (!j.contains(name)) return v;
    const json& a = j[name];
    if (!a.is_array() || int(a.size()) > 3)
        throw ScenarioError(std::string("field not a coordinate array: ") + name);
    for (int d = 0; d < int(a.size()) && d < dim; ++d) v[d] = a[d].get<double>();
    return v;
}

FieldSpec parseFieldSpec(const json& j, int dim) {
    std::string kind = j.value("kind", "");
    if (kind == "linear") return FieldSpec::linear(vecField(j, "direction", dim));
    if (kind == "logRadial")
        return FieldSpec::logRadial(numberField(j, "truncation", 1.0, true), vecField(j, "center", dim));
    if (kind == "radialPower")
        return FieldSpec::radialPower(numberField(j, "exponent", 1.0, true), vecField(j, "center", dim));
    if (kind == "indicatorSmoothed")
        return FieldSpec::indicatorSmoothed(vecField(j, "center", dim),
                                            numberField(j, "radius", 0.5, true),
                                            numberField(j, "ramp", 0.0));
    if (kind == "constant") return FieldSpec::constant(numberField(j, "value", 0.0, true));
    throw ScenarioError("unknown field kind: " + kind);
}

MeasureSpec parseMeasureSpec(const json& j, int dim) {
    std::string kind = j.value("kind", "");
    if (kind == "lebesgue") return MeasureSpec::lebesgue();
    if (kind == "normalizedBall")
        return MeasureSpec::normalizedBall(numberField(j, "radius", 0.5, true),
                                           vecField(j, "center", dim));
    if (kind == "powerDensity")
        return MeasureSpec::powerDensity(numberField(j, "exponent", 0.0, true),
                                         vecField(j, "center", dim));
    if (kind == "singleCell")
        return MeasureSpec::singleCell(int64_t(numberField(j, "cell", 0.0, true)),
                                       numberField(j, "mass", 1.0));
    throw ScenarioError("unknown measure kind: " + kind);
}

WeightSpec parseWeightSpec(const json& j, int dim) {
    std::string kind = j.value("kind", "");
    if (kind == "constant") return WeightSpec::constant(numberField(j, "value", 1.0));
    if (kind == "power") return WeightSpec::power(numberField(j, "beta", 0.0, true));
    if (kind == "maximal") {
        if (!j.contains("measure")) throw ScenarioError("missing field: measure");
        return WeightSpec::maximal(parseMeasureSpec(j["measure"], dim),
                                   numberField(j, "alpha", 0.0), numberField(j, "t", 1.0));
    }
    throw ScenarioError("unknown weight kind: " + kind);
}

InequalityParams parseParams(const json& j) {
    InequalityParams p;
    p.delta = numberField(j, "delta", p.delta);
    p.p = numberField(j, "p", p.p);
    p.q = numberField(j, "q", p.q);
    if (j.contains("alpha") && j["alpha"].is_string()) {
        if (j["alpha"].get<std::string>() != "auto") throw ScenarioError("bad field: alpha");
        p.alpha = std::numeric_limits<double>::quiet_NaN();
    } else {
        p.alpha = numberField(j, "alpha", p.alpha);
    }
    p.r = numberField(j, "r", p.r);
    p.s = numberField(j, "s", p.s);
    p.epsilon = numberField(j, "epsilon", p.epsilon);
    return p;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// alpha tied to (q, delta) by the theorem when requested
void resolveAlpha(TheoremId id, int n, InequalityParams& p) {
    if (!std::isnan(p.alpha)) return;
    switch (id) {
    case TheoremId::Wfp:
    case TheoremId::WfpLorentz:
    case TheoremId::Growth:
        p.alpha = n - p.q * (n - p.delta);
        break;
    case TheoremId::Wcp:
        p.alpha = n - p.q * (n - 1);
        break;
    default:
        p.alpha = 0.0;
        break;
    }
}

CheckReport runOne(const Scenario& sc, int depth, const InequalityParams& params, bool force) {
    Grid grid(sc.cube, depth);
    bool needsBrute = sc.theorem == TheoremId::Riesz || sc.theorem == TheoremId::Frac2Grad ||
                      sc.theorem == TheoremId::Frac2GradA1;
    if (needsBrute && grid.cellCount() > (int64_t(1) << 16) && !force)
        throw ScenarioError("exhaustive maximal function on more than 2^16 cells; "
                            "pass --force to fall back to the shifted estimate");
    ScalarField f = sampleField(sc.field, grid);
    CellMeasure mu;
    WeightField w;
    if (sc.hasMeasure) mu = sampleMeasure(sc.measure, grid);
    if (sc.hasWeight) w = makeWeight(sc.weight, grid);
    InequalityParams p = params;
    resolveAlpha(sc.theorem, grid.dim(), p);
    auto t0 = std::chrono::steady_clock::now();
    CheckReport rep = check(sc.theorem, f, sc.hasMeasure ? &mu : nullptr,
                            sc.hasWeight ? &w : nullptr, p);
    auto t1 = std::chrono::steady_clock::now();
    rep.runtimeMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rep;
}

} // namespace

Scenario parseScenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario parse error: ") + e.what());
    }
    Scenario sc;
    if (!j.contains("grid")) throw ScenarioError("missing field: grid");
    const json& jg = j["grid"];
    sc.dim = int(numberField(jg, "dim", 1, true));
    if (sc.dim < 1 || sc.dim > 3) throw ScenarioError("bad field: dim");
    sc.m = int(numberField(jg, "m", 6, true));
    if (sc.m < 0 || sc.m > 14) throw ScenarioError("bad field: m");
    if (jg.contains("cube")) {
        const json& jc = jg["cube"];
        sc.cube = Cube(sc.dim, vecField(jc, "corner", sc.dim), numberField(jc, "side", 1.0));
    } else {
        sc.cube = Cube::unit(sc.dim);
    }
    if (!j.contains("field")) throw ScenarioError("missing field: field");
    sc.field = parseFieldSpec(j["field"], sc.dim);
    if (j.contains("measure")) {
        sc.hasMeasure = true;
        sc.measure = parseMeasureSpec(j["measure"], sc.dim);
    }
    if (j.contains("weight")) {
        sc.hasWeight = true;
        sc.weight = parseWeightSpec(j["weight"], sc.dim);
    }
    if (!j.contains("check")) throw ScenarioError("missing field: check");
    sc.theorem = theoremFromName(j["check"].value("theorem", ""));
    if (j["check"].contains("params")) sc.params = parseParams(j["check"]["params"]);
    if (j.contains("sweep")) {
        sc.sweepName = j["sweep"].value("name", "");
        for (const auto& v : j["sweep"]["values"]) sc.sweepValues.push_back(v.get<double>());
        if (sc.sweepName.empty() || sc.sweepValues.empty()) throw ScenarioError("bad field: sweep");
    }
    if (j.contains("convergence"))
        for (const auto& v : j["convergence"]) sc.convergence.push_back(v.get<int>());
    sc.seed = uint64_t(numberField(j, "seed", 1));
    return sc;
}

Scenario loadScenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Scenario sc = parseScenario(ss.str());
    return sc;
}

ReportBundle runScenario(const Scenario& sc, bool force) {
    auto t0 = std::chrono::steady_clock::now();
    ReportBundle bundle;
    bundle.version = "1.0.0";

    auto applySweep = [&](InequalityParams base, double v) {
        if (sc.sweepName == "delta") base.delta = v;
        else if (sc.sweepName == "p") base.p = v;
        else if (sc.sweepName == "q") base.q = v;
        else if (sc.sweepName == "alpha") base.alpha = v;
        else if (sc.sweepName == "r") base.r = v;
        else if (sc.sweepName == "s") base.s = v;
        else if (sc.sweepName == "epsilon") base.epsilon = v;
        else throw ScenarioError("unknown sweep parameter: " + sc.sweepName);
        // a swept delta or q invalidates a fixed alpha; retie it
        if (sc.sweepName == "delta" || sc.sweepName == "q")
            base.alpha = std::numeric_limits<double>::quiet_NaN();
        return base;
    };

    std::vector<int> depths = sc.convergence.empty() ? std::vector<int>{sc.m} : sc.convergence;
    for (int depth : depths) {
        if (sc.sweepValues.empty()) {
            bundle.reports.push_back(runOne(sc, depth, sc.params, force));
        } else {
            for (double v : sc.sweepValues)
                bundle.reports.push_back(runOne(sc, depth, applySweep(sc.params, v), force));
        }
    }

    std::ostringstream hashInput;
    hashInput << sc.dim << '|' << sc.m << '|' << theoremName(sc.theorem) << '|' << sc.seed;
    bundle.scenarioHash = fmt17(double(fnv1a(hashInput.str())));
    auto t1 = std::chrono::steady_clock::now();
    bundle.wallMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return bundle;
}

std::string toCsv(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "theorem,n,m,delta,p,q,alpha,r,s,epsilon,lhs,rhs_core,empirical_constant,"
           "explicit_constant,pass_explicit,runtime_ms\n";
    for (const CheckReport& r : bundle.reports) {
        out << r.theorem << ',' << r.n << ',' << r.m << ',' << fmt17(r.params.delta) << ','
            << fmt17(r.params.p) << ',' << fmt17(r.params.q) << ',' << fmt17(r.params.alpha) << ','
            << fmt17(r.params.r) << ',' << fmt17(r.params.s) << ',' << fmt17(r.params.epsilon)
            << ',' << fmt17(r.lhs) << ',' << fmt17(r.rhsCore) << ','
            << fmt17(r.empiricalConstant) << ',';
        if (r.explicitConstant) out << fmt17(*r.explicitConstant);
        out << ',';
        if (r.passExplicit) out << (*r.passExplicit ? "true" : "false");
        // wall time lives in the JSON provenance; the CSV is byte-stable
        out << ",0\n";
    }
    return out.str();
}

std::string toJson(const ReportBundle& bundle) {
    json j;
    j["provenance"] = {{"scenarioHash", bundle.scenarioHash},
                       {"version", bundle.version},
                       {"wallMs", bundle.wallMs}};
    j["reports"] = json::array();
    for (const CheckReport& r : bundle.reports) {
        json jr;
        jr["theorem"] = r.theorem;
        jr["n"] = r.n;
        jr["m"] = r.m;
        jr["params"] = {{"delta", r.params.delta}, {"p", r.params.p},     {"q", r.params.q},
                        {"alpha", r.params.alpha}, {"r", r.params.r},     {"s", r.params.s},
                        {"epsilon", r.params.epsilon}};
        jr["lhs"] = r.lhs;
        jr["rhsCore"] = r.rhsCore;
        jr["empiricalConstant"] = r.empiricalConstant;
        if (r.explicitConstant) jr["explicitConstant"] = *r.explicitConstant;
        if (r.passExplicit) jr["passExplicit"] = *r.passExplicit;
        jr["conditional"] = r.conditional;
        jr["runtimeMs"] = r.runtimeMs;
        j["reports"].push_back(jr);
    }
    return j.dump(2) + "\n";
}

ReportBundle bundleFromJson(const std::string& text) {
    json j = json::parse(text);
    ReportBundle bundle;
    bundle.scenarioHash = j["provenance"]["scenarioHash"].get<std::string>();
    bundle.version = j["provenance"]["version"].get<std::string>();
    bundle.wallMs = j["provenance"]["wallMs"].get<double>();
    for (const auto& jr : j["reports"]) {
        CheckReport r;
        r.theorem = jr["theorem"].get<std::string>();
        r.n = jr["n"].get<int>();
        r.m = jr["m"].get<int>();
        r.params.delta = jr["params"]["delta"].get<double>();
        r.params.p = jr["params"]["p"].get<double>();
        r.params.q = jr["params"]["q"].get<double>();
        r.params.alpha = jr["params"]["alpha"].get<double>();
        r.params.r = jr["params"]["r"].get<double>();
        r.params.s = jr["params"]["s"].get<double>();
        r.params.epsilon = jr["params"]["epsilon"].get<double>();
        r.lhs = jr["lhs"].get<double>();
        r.rhsCore = jr["rhsCore"].get<double>();
        r.empiricalConstant = jr["empiricalConstant"].get<double>();
        if (jr.contains("explicitConstant")) r.explicitConstant = jr["explicitConstant"].get<double>();
        if (jr.contains("passExplicit")) r.passExplicit = jr["passExplicit"].get<bool>();
        r.conditional = jr.value("conditional", false);
        r.runtimeMs = jr["runtimeMs"].get<double>();
        bundle.reports.push_back(r);
    }
    return bundle;
}

bool allHardChecksPass(const ReportBundle& bundle) {
    for (const CheckReport& r : bundle.reports)
        if (r.passExplicit && !*r.passExplicit && !r.conditional) return false;
    return true;
}

namespace {

Scenario closedFormWfp() {
    Scenario sc;
    sc.dim = 1;
    sc.m = 10;
    sc.cube = Cube::unit(1);
    sc.field = FieldSpec::linear({1.0, 0.0, 0.0});
    sc.hasMeasure = true;
    sc.measure = MeasureSpec::lebesgue();
    sc.theorem = TheoremId::Wfp;
    sc.params.delta = 0.5;
    sc.params.p = 1.0;
    sc.params.q = 2.0;
    sc.params.alpha = 0.0;
    return sc;
}

} // namespace

ReportBundle runCorpusSuite() {
    auto t0 = std::chrono::steady_clock::now();
    ReportBundle bundle;
    bundle.version = "1.0.0";
    bundle.scenarioHash = "corpus";

    auto add = [&](const Scenario& sc) {
        ReportBundle b = runScenario(sc, false);
        for (CheckReport& r : b.reports) bundle.reports.push_back(r);
    };

    // closed-form main-inequality instance
    add(closedFormWfp());

    // classical variant of the closed-form instance
    {
        Scenario sc = closedFormWfp();
        sc.theorem = TheoremId::Wcp;
        sc.params.q = 1.0;
        sc.params.alpha = 1.0;
        add(sc);
    }

    // explicit-constant fractional-to-gradient check, closed form
    {
        Scenario sc = closedFormWfp();
        sc.theorem = TheoremId::Frac2Grad;
        sc.params.q = 1.0;
        sc.params.alpha = 0.0;
        add(sc);
    }

    // explicit-constant Riesz bound on a few measures
    for (double alpha : {0.3, 0.5, 0.8}) {
        Scenario sc;
        sc.dim = 1;
        sc.m = 7;
        sc.cube = Cube::unit(1);
        sc.field = FieldSpec::constant(0.0);
        sc.hasMeasure = true;
        sc.measure = MeasureSpec::lebesgue();
        sc.theorem = TheoremId::Riesz;
        sc.params.alpha = alpha;
        add(sc);
    }
    {
        Scenario sc;
        sc.dim = 2;
        sc.m = 5;
        sc.cube = Cube::unit(2);
        sc.field = FieldSpec::constant(0.0);
        sc.hasMeasure = true;
        sc.measure = MeasureSpec::normalizedBall(0.25, {0.5, 0.5, 0.0});
        sc.theorem = TheoremId::Riesz;
        sc.params.alpha = 0.7;
        add(sc);
    }

    // truncation: weak vs strong
    {
        Scenario sc;
        sc.dim = 1;
        sc.m = 8;
        sc.cube = Cube::unit(1);
        sc.field = FieldSpec::linear({1.0, 0.0, 0.0});
        sc.hasWeight = true;
        sc.weight = WeightSpec::power(0.5);
        sc.theorem = TheoremId::Trunc;
        sc.params.q = 2.0;
        add(sc);
    }

    // BBM balancing sweep
    {
        Scenario sc = closedFormWfp();
        sc.m = 9;
        sc.sweepName = "delta";
        sc.sweepValues = {0.5, 0.9};
        add(sc);
    }

    auto t1 = std::chrono::steady_clock::now();
    bundle.wallMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return bundle;
}

} // namespace fraclab
