#pragma once

#include "seqlep/lepski_adaptive.hpp"
#include "seqlep/process_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqlep {

/// Smoothness bounds, Hölder constant and optional lambda override for the grid.
struct GridConfig {
    double beta_lo = 0.6;
    double beta_hi = 0.8;
    double K = 1.0;
    std::optional<double> lambda;

    [[nodiscard]] double effective_lambda() const;
    [[nodiscard]] BandwidthGrid build(std::size_t n) const;
};

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased (divides by count - 1)

    [[nodiscard]] double standard_error() const;
};

/// Mean and unbiased variance, compensated, ascending order.
[[nodiscard]] SampleSummary summarize(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Monte Carlo risk
// ---------------------------------------------------------------------------

struct RiskExperiment {
    std::string scenario_id = "scenario";
    std::vector<std::size_t> n_list;
    std::size_t M = 15'000;
    SignalFunction signal;
    GridConfig grid;
    std::uint64_t master_seed = 0;
};

struct RiskRow {
    std::size_t n = 0;
    std::size_t M = 0;
    double lambda = 0.0;
    double R_n = 0.0;
    double standard_error = 0.0;
    double rate_N = 0.0;      ///< N(beta) for the signal's true beta
    double normalized = 0.0;  ///< rate_N * R_n
    std::vector<std::size_t> khat_histogram;  ///< counts for k = 0..m

    /// Most frequent selected index (smallest on ties).
    [[nodiscard]] std::size_t khat_mode() const;
};

struct RiskReport {
    std::string scenario_id;
    double beta = 0.0;
    double z0 = 0.0;
    std::vector<RiskRow> rows;
};

/// Seed used for the replications of one sample size in a risk experiment.
[[nodiscard]] std::uint64_t risk_path_seed(std::uint64_t master_seed, std::size_t n);

/**
 * @brief R_n = mean |S_hat_n(z0) - S(z0)| over M seeded paths, per n.
 *
 * Replication r of sample size n uses PathConfig{n, risk_path_seed(seed, n), r}.
 * The result does not depend on `workers`.
 * @throws std::invalid_argument if M == 0 or any n < 3
 */
[[nodiscard]] RiskReport monte_carlo_risk(const RiskExperiment& experiment, std::size_t workers = 1);

/// max/min of the rate-normalized risk across rows; 1 for a single row.
[[nodiscard]] double rate_stability(const RiskReport& report);
[[nodiscard]] double rate_stability(std::span<const double> normalized);

// ---------------------------------------------------------------------------
// Noise tail check for the sequential estimator
// ---------------------------------------------------------------------------

struct TailRow {
    double z = 0.0;
    double bound = 0.0;        ///< 2 exp(-z^2/8)
    double sharp_bound = 0.0;  ///< 2 sqrt(2/pi) exp(-z^2/8)
    double empirical = 0.0;    ///< frequency of |zeta| > z among triggered paths
    double margin = 0.0;       ///< 3 binomial standard errors
    bool pass = false;         ///< empirical <= bound
};

struct TailCheckReport {
    std::size_t n = 0;
    double h = 0.0;
    double H = 0.0;
    std::size_t M = 0;
    std::size_t triggered = 0;
    SampleSummary zeta;
    std::vector<TailRow> rows;

    [[nodiscard]] double triggered_fraction() const;
    /// Fewer than half the paths triggered: the tail frequencies are under-powered.
    [[nodiscard]] bool underpowered() const { return triggered_fraction() < 0.5; }
    [[nodiscard]] bool variance_in_band(double lo = 0.8, double hi = 1.2) const;
    [[nodiscard]] bool all_pass() const;
};

/**
 * @brief Empirical tail frequencies of the normalized noise term with H = n h.
 * @throws std::invalid_argument if any z < 2, h <= 0 or M == 0
 */
[[nodiscard]] TailCheckReport tail_suite(const SignalFunction& signal, std::size_t n, double h, std::size_t M,
                                         std::span<const double> z_list, std::uint64_t seed,
                                         std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Moment bounds of the autoregression
// ---------------------------------------------------------------------------

struct MomentRow {
    std::size_t k = 0;
    int order = 2;
    double bound = 0.0;
    double empirical = 0.0;
    double standard_error = 0.0;
    bool pass = false;  ///< empirical - 3 * standard_error <= bound
};

struct MomentReport {
    std::size_t n = 0;
    std::size_t M = 0;
    double eps = 0.0;
    std::vector<MomentRow> rows;  ///< k = 1..n, orders 2 and 4 interleaved

    [[nodiscard]] bool all_pass() const;
    /// Empirical E y_k^2 for k = 1..n (index k - 1).
    [[nodiscard]] std::vector<double> second_moments() const;
};

/// ((2t)! / (2^t t!)) (1/eps)^{2t}.
[[nodiscard]] double moment_bound(int t, double eps);

/// Empirical E y_k^2 and E y_k^4 for every k against moment_bound(1|2, eps).
[[nodiscard]] MomentReport moment_suite(const SignalFunction& signal, std::size_t n, std::size_t M,
                                        std::uint64_t seed, std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Stopping frequency
// ---------------------------------------------------------------------------

/// Either a fixed bandwidth or the rate bandwidth h(beta) for each n.
struct BandwidthRule {
    enum class Kind { fixed, rate };
    Kind kind = Kind::fixed;
    double value = 0.0;

    [[nodiscard]] static BandwidthRule fixed(double h) { return {Kind::fixed, h}; }
    [[nodiscard]] static BandwidthRule rate(double beta) { return {Kind::rate, beta}; }
    [[nodiscard]] double bandwidth(std::size_t n) const;
};

struct StoppingRow {
    std::size_t n = 0;
    double h = 0.0;
    double H = 0.0;
    std::size_t M = 0;
    std::size_t untriggered = 0;
    double frequency = 0.0;  ///< empirical P(tau_H > n)
    double standard_error = 0.0;
};

struct StoppingReport {
    std::vector<StoppingRow> rows;  ///< rule-major, n-minor
};

/// Empirical P(tau_H > n) with H = n h for every (rule, n) pair.
[[nodiscard]] StoppingReport stopping_suite(const SignalFunction& signal, std::span<const std::size_t> n_list,
                                            std::span<const BandwidthRule> rules, std::size_t M,
                                            std::uint64_t seed, std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Lower-bound perturbation statistics
// ---------------------------------------------------------------------------

/// (beta_hi - beta_lo) / ((2 beta_hi + 1)(2 beta_lo + 1)).
[[nodiscard]] double beta_bar(double beta_lo, double beta_hi);

/**
 * @brief Smooth compactly supported profile V(u) = g(u / width) with
 * g(u) = exp(1 - 1/(1 - u^2)) on (-1, 1). V(0) = 1 and the width is chosen so
 * that the integral of V^2 equals beta_bar / 2.
 */
struct PerturbationProfile {
    double width = 0.0;
    double bump_energy = 0.0;  ///< integral of g^2 over [-1, 1]
    double target_energy = 0.0;

    [[nodiscard]] double operator()(double u) const;
};

[[nodiscard]] double bump(double u);
[[nodiscard]] PerturbationProfile make_perturbation_profile(double beta_lo, double beta_hi);

struct LowerBoundDiagnostic {
    std::size_t n = 0;
    std::size_t M = 0;
    double beta_bar = 0.0;
    double sigma_star_sq = 0.0;  ///< beta_bar / 2
    double V_width = 0.0;
    double h_star = 0.0;
    double N_star = 0.0;
    std::vector<double> varsigma_sq_samples;  ///< (d_n / n) varsigma_n^2 per accepted path
    std::vector<double> eta_samples;
    std::size_t rejected = 0;  ///< paths with varsigma_n^2 < 1e-12

    [[nodiscard]] SampleSummary varsigma_summary() const;
    [[nodiscard]] SampleSummary eta_summary() const;
};

/// The alternative S(y) = V((y - z0)/h_*) / N_* used by the perturbation argument.
[[nodiscard]] SignalFunction perturbation_signal(double beta_lo, double beta_hi, std::size_t n, double z0);

/**
 * @brief Simulate M paths under the perturbation signal and record the
 * normalized energy (d_n/n) varsigma_n^2 and the self-normalized score eta_n.
 * @throws std::invalid_argument if the support of V around z0 leaves (0, 1)
 */
[[nodiscard]] LowerBoundDiagnostic lower_bound_diagnostic(double beta_lo, double beta_hi, std::size_t n,
                                                          std::size_t M, double z0, std::uint64_t seed,
                                                          std::size_t workers = 1);

}  // namespace seqlep
