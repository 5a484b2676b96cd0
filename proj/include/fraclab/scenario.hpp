#pragma once

#include "fraclab/check.hpp"

#include <string>
#include <vector>

namespace fraclab {

/// Single-file JSON description of one check: grid, field, measure and/or
/// weight from the sampling catalogs, a theorem id with parameters, and an
/// optional parameter sweep or convergence depth list.
struct Scenario {
    int dim = 1;
    int m = 6;
    Cube cube = Cube::unit(1);
    FieldSpec field;
    bool hasMeasure = false;
    MeasureSpec measure;
    bool hasWeight = false;
    WeightSpec weight;
    TheoremId theorem = TheoremId::Wfp;
    InequalityParams params;
    std::string sweepName;            // empty: no sweep
    std::vector<double> sweepValues;
    std::vector<int> convergence;     // empty: single depth
    uint64_t seed = 1;
};

/// Thrown on malformed scenarios; message names the offending field.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scenario parseScenario(const std::string& json);
Scenario loadScenario(const std::string& path);

struct ReportBundle {
    std::vector<CheckReport> reports;
    std::string scenarioHash;
    std::string version;
    double wallMs = 0.0;
};

/// Executes the scenario; deterministic for a fixed (scenario, seed)
/// regardless of thread count. force lifts the resource guards.
ReportBundle runScenario(const Scenario& sc, bool force = false);

/// The built-in corpus behind `suite corpus`.
ReportBundle runCorpusSuite();

std::string toCsv(const ReportBundle& bundle);
std::string toJson(const ReportBundle& bundle);
ReportBundle bundleFromJson(const std::string& json);

/// True when every report carrying an explicit constant passed.
bool allHardChecksPass(const ReportBundle& bundle);

} // namespace fraclab
