#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bemlab/cli_runner.hpp"

using namespace bemlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig shipped(const std::string& name) {
    const fs::path dir = BEMLAB_CONFIG_DIR;
    return parse_config(slurp(dir / name), dir.string());
}

int cli(const std::string& args) {
    const std::string cmd = std::string(BEMLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bemlab_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(ParseConfig, MinimalWithDefaults) {
    const RunConfig c = parse_config(R"({"scenario":"minkowski4","checks":["raychaudhuri_residual"]})");
    EXPECT_EQ(c.scenario, "minkowski4");
    ASSERT_EQ(c.checks.size(), 1u);
    EXPECT_EQ(c.checks[0], "raychaudhuri_residual");
    EXPECT_DOUBLE_EQ(c.rel_tol, 1e-10);
    EXPECT_DOUBLE_EQ(c.residual_tol, 5e-5);
    EXPECT_EQ(c.seed, 1u);
    const nlohmann::json echo = c.echo();
    EXPECT_EQ(echo.at("tolerances").at("rel").get<double>(), 1e-10);
    EXPECT_EQ(echo.at("sample").at("timelike_per_point").get<int>(), 32);
}

TEST(ParseConfig, UnknownCheckRejected) {
    try {
        parse_config(R"({"scenario":"de_sitter4","checks":["nosuch"]})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        ASSERT_EQ(e.violations().size(), 1u);
        EXPECT_NE(e.violations()[0].find("nosuch"), std::string::npos);
    }
}

TEST(ParseConfig, AllViolationsListed) {
    try {
        parse_config(R"({"scenario":"nowhere","checks":["a","b"],"tolerances":{"abs":0},
                         "sample":{"t_count":0},"extra":1})");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.violations().size(), 6u);
    }
}

TEST(ParseConfig, ParseErrorsCarryLineAndField) {
    try {
        parse_config("{\n  \"scenario\": \"minkowski4\",\n  \"seed\": ,\n}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse_config(R"({"scenario":"minkowski4","seed":"twelve"})");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "seed");
    }
    try {
        parse_config(R"({"sample":{"chi_max":"big"}})");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "sample.chi_max");
    }
    EXPECT_THROW(parse_config("[1, 2]"), ParseError);
}

TEST(ParseConfig, DefaultSuiteAndOrdering) {
    const RunConfig c = parse_config(R"({"checks":["trace_identity","manifest","manifest"]})");
    EXPECT_EQ(c.checks, (std::vector<std::string>{"manifest", "trace_identity"}));
    const RunConfig all = parse_config("{}");
    EXPECT_EQ(all.checks.size(), available_checks().size() - 1);
    for (const auto& id : all.checks) EXPECT_NE(id, "example7_certification");
}

TEST(ParseConfig, ScenarioFileResolvedRelativeToConfig) {
    const RunConfig c = shipped("closed_frw4.json");
    EXPECT_FALSE(c.scenario_path.empty());
    EXPECT_TRUE(fs::exists(c.scenario_path));
    const Scenario s = resolve_scenario(c);
    EXPECT_EQ(s.name(), "closed_frw4");
}

TEST(ParseConfig, WeightAndDimensionOverrides) {
    const RunConfig c = parse_config(R"({"scenario":"de_sitter4","weight":{"kind":"sinh_squared","a":2},"m":3})");
    const Scenario s = resolve_scenario(c);
    EXPECT_EQ(s.params.m, SyntheticDimension::finite(3.0));
    Vec p(4);
    p << 0.5, M_PI / 2, M_PI / 2, 0.0;
    EXPECT_NEAR(s.f.eval(p), std::sinh(1.0) * std::sinh(1.0), 1e-14);
    EXPECT_THROW(parse_config(R"({"m":"lots"})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"m":-1})"), ValidationError);
}

TEST(Run, MinkowskiFullSuitePasses) {
    const RunResult r = run(shipped("minkowski4.json"));
    EXPECT_EQ(r.exit_code, 0) << r.report;
    EXPECT_EQ(r.outcomes.size(), 11u);
    for (std::size_t i = 1; i < r.outcomes.size(); ++i) EXPECT_LT(r.outcomes[i - 1].id, r.outcomes[i].id);
    EXPECT_NE(r.report.find("summary:"), std::string::npos);
    EXPECT_EQ(r.csv.count("raychaudhuri_residual.csv"), 1u);
}

TEST(Run, DeSitterConvergenceFails) {
    const RunResult r = run(shipped("de_sitter4_convergence.json"));
    EXPECT_EQ(r.exit_code, 1);
    ASSERT_EQ(r.outcomes.size(), 1u);
    EXPECT_EQ(r.outcomes[0].status, CheckStatus::Fail);
    EXPECT_NE(r.report.find("[FAIL] timelike_convergence: min=-3"), std::string::npos) << r.report;
}

TEST(Run, Example7CertificationPasses) {
    const RunResult r = run(shipped("example7.json"));
    EXPECT_EQ(r.exit_code, 0) << r.report;
    EXPECT_NE(r.report.find("K*=1.5"), std::string::npos);
}

TEST(Run, ClosedFrwFileScenario) {
    const RunResult r = run(shipped("closed_frw4.json"));
    EXPECT_EQ(r.exit_code, 0) << r.report;
    EXPECT_NE(r.report.find("geodesic: equatorial_boost"), std::string::npos);
}

TEST(Run, RuntimeErrorGivesExitTwo) {
    RunConfig c = parse_config(R"({"scenario":"minkowski4","checks":["manifest"],"geodesic":"nope"})");
    const RunResult r = run(c);
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.report.find("FAILED: "), std::string::npos);
}

TEST(Run, EveryLineCarriesBasis) {
    const RunResult r = run(shipped("minkowski4.json"));
    std::istringstream in(r.report);
    std::string line;
    int verdicts = 0;
    while (std::getline(in, line)) {
        if (line.rfind("[", 0) != 0) continue;
        ++verdicts;
        EXPECT_NE(line.find("(basis: "), std::string::npos) << line;
    }
    EXPECT_EQ(verdicts, 11);
}

TEST(Run, CsvSchemaAndDeterminism) {
    const RunConfig c = shipped("example7.json");
    const RunResult a = run(c), b = run(c);
    EXPECT_EQ(a.report, b.report);
    EXPECT_EQ(a.csv, b.csv);
    const std::string& csv = a.csv.at("raychaudhuri_residual.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,theta_f,theta,det_A,tr_sigma2,tr_omega2,residual,mask");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
        ++rows;
    }
    EXPECT_EQ(rows, 3001u);
}

TEST(Artifacts, WrittenToOutputDirectory) {
    RunConfig c = shipped("minkowski4.json");
    c.out_dir = scratch("artifacts").string();
    const RunResult r = run(c);
    write_artifacts(c, r);
    EXPECT_EQ(slurp(fs::path(c.out_dir) / "report.txt"), r.report);
    EXPECT_EQ(slurp(fs::path(c.out_dir) / "raychaudhuri_residual.csv"), r.csv.at("raychaudhuri_residual.csv"));
}

TEST(Binary, ExitCodes) {
    const fs::path dir = BEMLAB_CONFIG_DIR;
    const fs::path out = scratch("binary");
    EXPECT_EQ(cli("run " + (dir / "minkowski4.json").string() + " --out " + (out / "m").string()), 0);
    EXPECT_EQ(cli("run " + (dir / "de_sitter4_convergence.json").string() + " --out " + (out / "d").string()), 1);
    EXPECT_EQ(cli("run " + (out / "missing.json").string()), 2);
    EXPECT_EQ(cli("list-checks"), 0);
    EXPECT_EQ(cli("list-scenarios"), 0);
    EXPECT_EQ(cli("run " + (dir / "minkowski4.json").string() + " --tol -1"), 2);
    EXPECT_NE(cli(""), 0);
}

TEST(Binary, ByteIdenticalRepeats) {
    const fs::path dir = BEMLAB_CONFIG_DIR;
    const fs::path out = scratch("repeat");
    const std::string cfg = (dir / "example7.json").string();
    ASSERT_EQ(cli("run " + cfg + " --seed 11 --out " + (out / "a").string()), 0);
    ASSERT_EQ(cli("run " + cfg + " --seed 11 --out " + (out / "b").string()), 0);
    EXPECT_EQ(slurp(out / "a" / "raychaudhuri_residual.csv"), slurp(out / "b" / "raychaudhuri_residual.csv"));
    const std::string ra = slurp(out / "a" / "report.txt");
    EXPECT_NE(ra.find("\"seed\":11"), std::string::npos);
    // reports differ only in the echoed output directory
    auto strip = [](std::string s) { return s.substr(s.find('\n', s.find("config:"))); };
    EXPECT_EQ(strip(ra), strip(slurp(out / "b" / "report.txt")));
}
