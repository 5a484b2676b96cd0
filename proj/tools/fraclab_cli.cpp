#include "fraclab/parallel.hpp"
#include "fraclab/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

using namespace fraclab;

namespace {

int emit(const ReportBundle& bundle, const std::string& outPath, const std::string& format) {
    std::string text = format == "json" ? toJson(bundle) : toCsv(bundle);
    if (outPath.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(outPath, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << outPath << "\n";
            return 2;
        }
        out << text;
    }
    return allHardChecksPass(bundle) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Poincare inequality lab"};
    app.require_subcommand(1);

    std::string scenarioPath, outPath, format = "csv";
    int threads = int(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("THREADS")) threads = std::atoi(env);
    uint64_t seed = 0;
    bool haveSeed = false, force = false;

    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--out", outPath, "output file (default: stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--threads", threads, "worker thread count");
        cmd->add_option("--seed", seed, "override the scenario seed")
            ->each([&](const std::string&) { haveSeed = true; });
        cmd->add_flag("--force", force, "lift the resource guards");
    };

    CLI::App* run = app.add_subcommand("run", "execute one scenario file");
    run->add_option("scenario", scenarioPath, "scenario JSON path")->required();
    addCommon(run);

    CLI::App* suite = app.add_subcommand("suite", "run a built-in suite");
    std::string suiteName;
    suite->add_option("name", suiteName, "suite name (corpus)")->required();
    addCommon(suite);

    CLI::App* cex = app.add_subcommand("counterexample", "blow-up table for a failure family");
    std::string familyId, engineName = "radial";
    int kMin = 2, kMax = 8, gridDepth = 10, dimN = 2;
    double cxP = 1.5, cxQ = 2.0, cxDelta = 0.5, cxEps = 0.5;
    cex->add_option("--family", familyId, "PQ-CLASSICAL, PQ-FRACTIONAL, ALPHA-CLASSICAL, ALPHA-FRACTIONAL")
        ->required();
    cex->add_option("--k-min", kMin)->required();
    cex->add_option("--k-max", kMax)->required();
    cex->add_option("--engine", engineName, "grid or radial")
        ->check(CLI::IsMember({"grid", "radial"}));
    cex->add_option("--n", dimN, "dimension");
    cex->add_option("--p", cxP);
    cex->add_option("--q", cxQ);
    cex->add_option("--delta", cxDelta);
    cex->add_option("--epsilon", cxEps);
    cex->add_option("--grid-depth", gridDepth);
    cex->add_option("--out", outPath, "output file (default: stdout)");
    cex->add_option("--threads", threads, "worker thread count");

    CLI::App* conv = app.add_subcommand("converge", "re-run a scenario at several depths");
    std::string levelsArg = "6,8,10,12";
    conv->add_option("scenario", scenarioPath, "scenario JSON path")->required();
    conv->add_option("--levels", levelsArg, "comma-separated depth list");
    addCommon(conv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (threads > 0) setThreadCount(threads);

    try {
        if (run->parsed()) {
            Scenario sc = loadScenario(scenarioPath);
            if (haveSeed) sc.seed = seed;
            return emit(runScenario(sc, force), outPath, format);
        }
        if (suite->parsed()) {
            if (suiteName != "corpus") {
                std::cerr << "error: unknown suite: " << suiteName << "\n";
                return 2;
            }
            return emit(runCorpusSuite(), outPath, format);
        }
        if (cex->parsed()) {
            InequalityParams params;
            params.p = cxP;
            params.q = cxQ;
            params.delta = cxDelta;
            params.epsilon = cxEps;
            auto table = runCounterexample(familyFromName(familyId), dimN, kMin, kMax, params,
                                           engineName == "grid" ? CexEngine::Grid
                                                                : CexEngine::Radial,
                                           gridDepth);
            std::ostringstream out;
            out << "k,lhs_lower,rhs_upper,ratio\n";
            for (const auto& row : table) {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", row.k, row.lhsLower,
                              row.rhsUpper, row.ratio);
                out << buf;
            }
            if (outPath.empty()) {
                std::cout << out.str();
            } else {
                std::ofstream f(outPath, std::ios::binary);
                if (!f) {
                    std::cerr << "error: cannot write " << outPath << "\n";
                    return 2;
                }
                f << out.str();
            }
            return 0;
        }
        if (conv->parsed()) {
            Scenario sc = loadScenario(scenarioPath);
            if (haveSeed) sc.seed = seed;
            sc.convergence.clear();
            std::stringstream ss(levelsArg);
            std::string tok;
            while (std::getline(ss, tok, ',')) sc.convergence.push_back(std::stoi(tok));
            if (sc.convergence.empty()) {
                std::cerr << "error: empty --levels list\n";
                return 2;
            }
            return emit(runScenario(sc, force), outPath, format);
        }
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
