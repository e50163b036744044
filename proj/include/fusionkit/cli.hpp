#pragma once

#include "fusionkit/fusion.hpp"
#include "fusionkit/metrics.hpp"
#include "fusionkit/simulation.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusionkit::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kIo = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maps an exception thrown by a command to its process exit code.
int exit_code_for(const std::exception& e);

struct ScenarioOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<double> pd;
    std::filesystem::path out;
};

struct FuseOptions {
    std::filesystem::path input_a;
    std::filesystem::path input_b;
    std::string method = "jl";
    double omega = 0.5;
    std::size_t k_best = 100;
    std::filesystem::path out;
};

struct ExperimentOptions {
    std::optional<std::filesystem::path> config;
    std::vector<std::string> methods{"labelwise", "lm", "jl", "simplified-jl"};
    std::size_t trials = 50;
    std::optional<std::uint64_t> seed;
    std::optional<double> pd;
    std::optional<double> omega;
    std::size_t k_best = 100;
    TospaParams tospa;
    std::size_t threads = 0;
    std::filesystem::path out;
};

struct EvalOptions {
    std::filesystem::path tracks_a;
    std::filesystem::path tracks_b;
    TospaParams tospa;
    std::filesystem::path out;
};

/// Resolves the scenario: the config file when given, else the built-in default,
/// then seed and detection overrides.
Scenario resolve_scenario(const std::optional<std::filesystem::path>& config, std::optional<std::uint64_t> seed,
                          std::optional<double> pd);

/// Writes scenario.json, truth.json and measurements.json (trial 0).
void cmd_scenario(const ScenarioOptions& opt, std::ostream& console);

/// Writes fused.json and diagnostics.json; returns the diagnostics.
nlohmann::json cmd_fuse(const FuseOptions& opt, std::ostream& console);

/// Writes per_step.csv and summary.json.
MonteCarloReport cmd_experiment(const ExperimentOptions& opt, std::ostream& console);

/// Writes tospa.csv; returns the per-step values.
std::vector<double> cmd_eval(const EvalOptions& opt, std::ostream& console);

/// Every command also writes manifest.json into its output directory.
nlohmann::json run_manifest(const std::string& command, const std::optional<std::filesystem::path>& config,
                            std::optional<std::uint64_t> seed, const std::vector<std::string>& methods,
                            const std::filesystem::path& out);

/// Four significant digits, for console summaries.
std::string short_number(double x);

}  // namespace fusionkit::cli
