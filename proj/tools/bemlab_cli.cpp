// bemlab - command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bemlab/cli_runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bemlab: weighted Lorentzian comparison checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tol = 0.0;
    auto* run = app.add_subcommand("run", "run the checks of a JSON configuration");
    run->add_option("config", config_path, "configuration file")->required();
    auto* out_opt = run->add_option("--out", out_dir, "output directory");
    auto* seed_opt = run->add_option("--seed", seed, "sampling seed");
    auto* tol_opt = run->add_option("--tol", tol, "integrator relative tolerance")
                        ->check(CLI::PositiveNumber);

    auto* list_scenarios = app.add_subcommand("list-scenarios", "list built-in scenarios");
    auto* list_checks = app.add_subcommand("list-checks", "list check identifiers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*list_scenarios) {
        for (const auto& name : bemlab::builtin_scenarios()) std::cout << name << "\n";
        return 0;
    }
    if (*list_checks) {
        for (const auto& c : bemlab::available_checks())
            std::cout << c.id << (c.informational ? " (informational)" : "") << ": " << c.basis
                      << "\n";
        return 0;
    }

    bemlab::RunConfig config;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read " << config_path << "\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        const auto base = std::filesystem::path(config_path).parent_path().string();
        config = bemlab::parse_config(ss.str(), base);
    } catch (const bemlab::ParseError& e) {
        std::cerr << "parse error";
        if (e.line()) std::cerr << " at line " << e.line();
        if (!e.field().empty()) std::cerr << " in field '" << e.field() << "'";
        std::cerr << ": " << e.what() << "\n";
        return 2;
    } catch (const bemlab::ValidationError& e) {
        std::cerr << "invalid configuration:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
        return 2;
    }
    if (*out_opt) config.out_dir = out_dir;
    if (*seed_opt) config.seed = seed;
    if (*tol_opt) config.rel_tol = tol;

    const bemlab::RunResult result = bemlab::run(config);
    try {
        bemlab::write_artifacts(config, result);
    } catch (const std::exception& e) {
        std::cerr << "error writing artifacts: " << e.what() << "\n";
        return 2;
    }
    std::cout << result.report;
    return result.exit_code;
}
