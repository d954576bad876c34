#pragma once

#include "seqlep/process_model.hpp"
#include "seqlep/risk_lab.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqlep {

/// Malformed configuration text; the message carries "source:line: ".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parsed value violates a module precondition; names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& field, const std::string& reason)
        : std::invalid_argument(field + ": " + reason), field_(field) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct SignalSpec {
    enum class Kind { benchmark, constant };
    Kind kind = Kind::benchmark;
    double beta = 0.7;
    double z0 = 0.70710678118654752;
    double c = 0.0;

    [[nodiscard]] SignalFunction make() const;
};

/**
 * @brief One experiment scenario.
 *
 * Core keys: signal.kind, signal.beta, signal.z0, signal.c, n_list,
 * replications, grid.beta_lo, grid.beta_hi, grid.K, grid.lambda, seed,
 * out_dir. Suite keys: tail.n, tail.h, tail.h_beta, tail.z_list, moments.n,
 * stopping.n_list, stopping.h_list, stopping.h_beta_list, lowerbound.n,
 * trace.n, trace.replication.
 */
struct ScenarioConfig {
    std::string id = "scenario";
    SignalSpec signal;
    std::vector<std::size_t> n_list{100, 1000, 5000, 10000};
    std::size_t replications = 15'000;
    GridConfig grid;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";

    std::size_t tail_n = 1000;
    std::optional<double> tail_h;       ///< fixed bandwidth; otherwise h(tail_h_beta)
    std::optional<double> tail_h_beta;  ///< defaults to signal.beta
    std::vector<double> tail_z_list{2.0, 2.5, 3.0};
    std::size_t moments_n = 1000;
    std::optional<std::vector<std::size_t>> stopping_n_list;  ///< defaults to n_list
    std::vector<double> stopping_h_list;
    std::optional<std::vector<double>> stopping_h_beta_list;  ///< defaults to {signal.beta}
    std::size_t lowerbound_n = 100'000;
    std::size_t trace_n = 100;
    std::uint64_t trace_replication = 0;

    [[nodiscard]] double tail_bandwidth() const;
    [[nodiscard]] std::vector<BandwidthRule> stopping_rules() const;
    [[nodiscard]] std::vector<std::size_t> stopping_sizes() const;
};

struct ExperimentConfig {
    std::string source = "<memory>";
    ScenarioConfig defaults;               ///< global keys before any scenario block
    std::vector<ScenarioConfig> scenarios;
};

/**
 * @brief Parse the key/value format.
 *
 * Lines are `key = value`; `#` starts a comment; `[scenario NAME]` opens a
 * scenario block. Keys before the first block set defaults inherited by every
 * scenario. Lists are comma separated.
 * @throws ConfigError on syntax errors, unknown keys or unparsable values
 */
[[nodiscard]] ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// @throws ValidationError naming the first field that violates a precondition
void validate(const ScenarioConfig& scenario);
void validate(const ExperimentConfig& config);

}  // namespace seqlep
