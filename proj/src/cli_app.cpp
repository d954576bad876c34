#include "seqlep/cli_app.hpp"

#include "seqlep/lepski_adaptive.hpp"
#include "seqlep/report_io.hpp"
#include "seqlep/risk_lab.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

namespace seqlep {

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto file = dir / name;
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open output file " + file.string());
    }
    return out;
}

bool lower_bound_checks(const LowerBoundDiagnostic& diag) {
    const SampleSummary varsigma = diag.varsigma_summary();
    const SampleSummary eta = diag.eta_summary();
    return std::fabs(varsigma.mean - diag.sigma_star_sq) <= 0.10 * diag.sigma_star_sq &&
           std::fabs(eta.mean) < 0.05 && eta.variance >= 0.9 && eta.variance <= 1.1;
}

bool grid_checks(const BandwidthGrid& grid) {
    const double root_log_n = std::sqrt(std::log(static_cast<double>(grid.n)));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double lhs = grid.N_points[k] * grid.N_points[k];
        const double rhs = grid.d_n * grid.h_points[k];
        const double rate = std::sqrt(static_cast<double>(grid.n) * grid.h_points[k]) / grid.N_points[k];
        if (std::fabs(lhs - rhs) > 1e-12 * rhs || std::fabs(rate - root_log_n) > 1e-12 * root_log_n) {
            return false;
        }
    }
    return true;
}

// Untriggered frequency may not rise with n beyond two standard errors, per rule.
bool stopping_checks(const StoppingReport& report, std::size_t sizes_per_rule) {
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        if ((i + 1) % sizes_per_rule == 0) {
            continue;
        }
        const auto& a = report.rows[i];
        const auto& b = report.rows[i + 1];
        if (b.n > a.n && b.frequency > a.frequency + 2.0 * std::hypot(a.standard_error, b.standard_error)) {
            return false;
        }
    }
    return true;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"tail", "moments", "stopping", "lowerbound", "grid"};
    return names;
}

void apply_overrides(ExperimentConfig& config, const CliOptions& options) {
    auto apply = [&](ScenarioConfig& s) {
        if (options.replications) {
            s.replications = *options.replications;
        }
        if (options.seed) {
            s.seed = *options.seed;
        }
        if (options.trace_n) {
            s.trace_n = *options.trace_n;
        }
    };
    apply(config.defaults);
    for (auto& s : config.scenarios) {
        apply(s);
    }
}

int run_risk(const ExperimentConfig& config, const CliOptions& options, std::ostream& log) {
    auto risk = open_output(config.defaults.out_dir, "risk.csv");
    auto khat = open_output(config.defaults.out_dir, "risk_khat.csv");
    write_risk_header(risk);
    write_khat_header(khat);
    for (const auto& s : config.scenarios) {
        RiskExperiment experiment;
        experiment.scenario_id = s.id;
        experiment.n_list = s.n_list;
        experiment.M = s.replications;
        experiment.signal = s.signal.make();
        experiment.grid = s.grid;
        experiment.master_seed = s.seed;
        fmt::print(log, "[{}] lambda = {} ({}), M = {}\n", s.id, format_real(s.grid.effective_lambda()),
                   s.grid.lambda ? "configured" : "default", s.replications);
        const RiskReport report = monte_carlo_risk(experiment, options.workers);
        for (const auto& row : report.rows) {
            fmt::print(log, "[{}] n = {:>7}  R_n = {:.4f} +- {:.4f}  N(beta) R_n = {:.4f}  k_hat mode = {}\n", s.id,
                       row.n, row.R_n, row.standard_error, row.normalized, row.khat_mode());
        }
        write_risk_rows(risk, report);
        write_khat_rows(khat, report);
    }
    return kExitSuccess;
}

int run_suite(const ExperimentConfig& config, const std::string& suite, const CliOptions& options,
              std::ostream& log) {
    bool ok = true;
    for (const auto& s : config.scenarios) {
        const SignalFunction signal = s.signal.make();
        fmt::print(log, "[{}] suite {} (lambda = {})\n", s.id, suite, format_real(s.grid.effective_lambda()));
        if (suite == "grid") {
            for (const std::size_t n : s.n_list) {
                const BandwidthGrid grid = s.grid.build(n);
                auto out = open_output(s.out_dir, fmt::format("grid_{}_n{}.csv", s.id, n));
                write_grid_csv(out, grid);
                ok = grid_checks(grid) && ok;
            }
        } else if (suite == "tail") {
            const TailCheckReport report = tail_suite(signal, s.tail_n, s.tail_bandwidth(), s.replications,
                                                      s.tail_z_list, s.seed, options.workers);
            auto out = open_output(s.out_dir, fmt::format("tail_{}.csv", s.id));
            write_tail_csv(out, report);
            if (report.underpowered()) {
                fmt::print(log, "[{}] warning: only {:.1f}% of paths triggered; tail frequencies are under-powered\n",
                           s.id, 100.0 * report.triggered_fraction());
            }
            fmt::print(log, "[{}] zeta mean = {:.4f}, variance = {:.4f}\n", s.id, report.zeta.mean,
                       report.zeta.variance);
            ok = report.all_pass() && report.variance_in_band() && !report.underpowered() && ok;
        } else if (suite == "moments") {
            const MomentReport report = moment_suite(signal, s.moments_n, s.replications, s.seed, options.workers);
            auto out = open_output(s.out_dir, fmt::format("moments_{}.csv", s.id));
            write_moments_csv(out, report);
            ok = report.all_pass() && ok;
        } else if (suite == "stopping") {
            const auto sizes = s.stopping_sizes();
            const auto rules = s.stopping_rules();
            const StoppingReport report =
                stopping_suite(signal, sizes, rules, s.replications, s.seed, options.workers);
            auto out = open_output(s.out_dir, fmt::format("stopping_{}.csv", s.id));
            write_stopping_csv(out, report);
            ok = stopping_checks(report, sizes.size()) && ok;
        } else if (suite == "lowerbound") {
            const LowerBoundDiagnostic diag = lower_bound_diagnostic(
                s.grid.beta_lo, s.grid.beta_hi, s.lowerbound_n, s.replications, s.signal.z0, s.seed, options.workers);
            auto out = open_output(s.out_dir, fmt::format("lowerbound_{}.csv", s.id));
            write_lowerbound_csv(out, diag);
            if (diag.rejected > 0) {
                fmt::print(log, "[{}] rejected {} paths with vanishing energy\n", s.id, diag.rejected);
            }
            ok = lower_bound_checks(diag) && ok;
        } else {
            throw std::invalid_argument("unknown suite '" + suite + "'");
        }
    }
    if (!ok) {
        fmt::print(log, "suite {}: at least one check failed\n", suite);
    }
    return (!ok && options.strict) ? kExitCheckFailure : kExitSuccess;
}

int run_trace(const ExperimentConfig& config, const CliOptions&, std::ostream& log) {
    for (const auto& s : config.scenarios) {
        const SignalFunction signal = s.signal.make();
        const BandwidthGrid grid = s.grid.build(s.trace_n);
        const Path path =
            simulate_path(signal, PathConfig{s.trace_n, risk_path_seed(s.seed, s.trace_n), s.trace_replication});
        const AdaptiveEstimate estimate = adaptive_estimate(path, signal.z0, grid);

        auto trace = open_output(s.out_dir, fmt::format("trace_{}.csv", s.id));
        write_trace_csv(trace, grid, estimate);

        auto sequential = open_output(s.out_dir, fmt::format("sequential_{}.csv", s.id));
        write_sequential_header(sequential);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double h = grid.h_points[j];
            const KernelWindow window = make_window(s.trace_n, signal.z0, h);
            write_sequential_row(sequential, j,
                                 decompose_error(path, signal, window, static_cast<double>(s.trace_n) * h));
        }

        auto path_out = open_output(s.out_dir, fmt::format("path_{}.csv", s.id));
        write_path_csv(path_out, path);
        fmt::print(log, "[{}] n = {}, lambda = {}, k_hat = {}, estimate = {}\n", s.id, s.trace_n,
                   format_real(grid.lambda), estimate.k_hat, format_real(estimate.value));
    }
    return kExitSuccess;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequential kernel estimation with adaptive bandwidth selection: Monte Carlo laboratory"};
    CliOptions options;
    options.workers = std::max(1u, std::thread::hardware_concurrency());
    std::string config_path;
    app.add_option("--config", config_path, "Experiment configuration file")->required();
    app.add_option("--suite", options.suite, "Run a check suite instead of the risk experiment")
        ->check(CLI::IsMember(suite_names()));
    app.add_flag("--trace", options.trace, "Dump the adaptive trace of one seeded path per scenario");
    app.add_option("--n", options.trace_n, "Sample size for --trace (overrides trace.n)")
        ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 40));
    app.add_option("--replications", options.replications, "Override the replication count")
        ->check(CLI::PositiveNumber);
    app.add_option("--workers", options.workers, "Worker threads (never changes results)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", options.seed, "Override the master seed");
    app.add_flag("--strict", options.strict, "Exit with code 4 when a suite check fails");
    app.get_formatter()->column_width(32);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfigError;
    }
    if (options.trace && options.suite) {
        err << "error: --trace and --suite are mutually exclusive\n";
        return kExitConfigError;
    }
    options.config = config_path;

    ExperimentConfig config;
    try {
        config = load_config(options.config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    apply_overrides(config, options);
    try {
        validate(config);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidationError;
    }

    try {
        if (options.trace) {
            return run_trace(config, options, out);
        }
        if (options.suite) {
            return run_suite(config, *options.suite, options, out);
        }
        return run_risk(config, options, out);
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace seqlep
