// cli_runner.hpp - Batch configuration, check dispatch and report writing.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bemlab/scenarios.hpp"
#include "json.hpp"

namespace bemlab {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::string field)
        : std::runtime_error(msg), line_(line), field_(std::move(field)) {}
    std::size_t line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

struct RunConfig {
    std::string scenario = "minkowski4";
    std::string scenario_path;  // resolved file path when not a built-in
    std::vector<std::string> checks;
    std::string geodesic;  // declared geodesic name; empty = first
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double spacing = 1e-3;
    double residual_tol = 5e-5;
    int timelike_per_point = 32;
    int null_per_point = 8;
    double chi_max = 3.0;
    double t_min = -1.0;
    double t_max = 1.0;
    int t_count = 5;
    std::optional<WeightSpec> weight;
    std::optional<std::string> m;  // "inf" or a number, overrides the scenario
    std::uint64_t seed = 1;
    std::string out_dir = "bemlab_out";

    // Fully defaulted configuration as JSON (keys sorted).
    nlohmann::json echo() const;
};

struct CheckInfo {
    std::string id;
    std::string basis;
    bool informational = false;
};

// Sorted by identifier.
const std::vector<CheckInfo>& available_checks();

// Throws ParseError (malformed JSON or a field of the wrong type) and
// ValidationError (all semantic violations at once). Relative scenario
// paths are resolved against base_dir.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "");

enum class CheckStatus { Pass, Fail, Info };

struct CheckOutcome {
    std::string id;
    CheckStatus status = CheckStatus::Fail;
    std::string summary;
};

struct RunResult {
    int exit_code = 2;
    std::vector<CheckOutcome> outcomes;
    std::string report;
    std::map<std::string, std::string> csv;  // file name -> contents
};

// Runs every configured check; exit code 0 when all pass, 1 on a failing
// check, 2 on a runtime error (the report then ends with a FAILED line).
RunResult run(const RunConfig& config);

// Writes report.txt and the CSV files into config.out_dir.
void write_artifacts(const RunConfig& config, const RunResult& result);

Scenario resolve_scenario(const RunConfig& config);

}  // namespace bemlab
