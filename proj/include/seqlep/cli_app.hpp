#pragma once

#include "seqlep/config.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace seqlep {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitConfigError = 2,
    kExitValidationError = 3,
    kExitCheckFailure = 4,
};

struct CliOptions {
    std::filesystem::path config;
    std::optional<std::string> suite;
    bool trace = false;
    std::optional<std::size_t> trace_n;
    std::optional<std::size_t> replications;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    bool strict = false;
};

/// Names accepted by --suite.
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Apply --replications / --seed overrides to every scenario.
void apply_overrides(ExperimentConfig& config, const CliOptions& options);

/// risk.csv and risk_khat.csv in the global out_dir.
int run_risk(const ExperimentConfig& config, const CliOptions& options, std::ostream& log);

/// <suite>_<scenario>.csv per scenario (grid: one file per sample size).
int run_suite(const ExperimentConfig& config, const std::string& suite, const CliOptions& options,
              std::ostream& log);

/// trace_, sequential_ and path_<scenario>.csv for one seeded path per scenario.
int run_trace(const ExperimentConfig& config, const CliOptions& options, std::ostream& log);

/// Parse arguments, load and validate the config, dispatch. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seqlep
