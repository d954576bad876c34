#pragma once

#include "seqlep/process_model.hpp"
#include "seqlep/sequential_kernel.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace seqlep {

/// d_n = n / ln n.
[[nodiscard]] double effective_sample_size(std::size_t n);

/// h(beta) = d_n^{-1/(2 beta + 1)}.
[[nodiscard]] double rate_bandwidth(std::size_t n, double beta);

/// N(beta) = d_n^{beta/(2 beta + 1)}, the adaptive convergence rate.
[[nodiscard]] double adaptive_rate(std::size_t n, double beta);

/**
 * @brief Geometric bandwidth grid between the smoothness bounds.
 *
 * beta_k = beta_lo + (k/m)(beta_hi - beta_lo) for k = 0..m with
 * m = floor(ln d_n) + 1; h_k = h(beta_k) and N_k = N(beta_k). N_points has
 * one extra entry N_{m+1}, built from beta_{m+1} capped at 1, which the
 * omega recursion needs for its k = j = m term.
 */
struct BandwidthGrid {
    std::size_t n = 0;
    double d_n = 0.0;
    std::size_t m = 0;
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    std::vector<double> beta_points;
    std::vector<double> h_points;
    std::vector<double> N_points;
    double lambda = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return m + 1; }
    /// lambda / N_j.
    [[nodiscard]] double threshold(std::size_t j) const { return lambda / N_points.at(j); }
};

/// 1.01 * (K + e * sqrt(4 + 4 / (2 beta_lo + 1))), just above the admissible lower limit.
[[nodiscard]] double default_lambda(double K, double beta_lo);

/**
 * @brief Build the grid for sample size n.
 *
 * lambda is lambda_override when present, default_lambda(K, beta_lo) otherwise.
 * @throws std::invalid_argument if n <= 2, the beta bounds are not
 *         0 < beta_lo < beta_hi <= 1, K <= 0 or lambda_override <= 0
 */
[[nodiscard]] BandwidthGrid build_grid(std::size_t n, double beta_lo, double beta_hi,
                                       std::optional<double> lambda_override = std::nullopt,
                                       double K = 1.0);

/**
 * @brief omega(h_j) = max_{0<=k<=j} (|S*_j - S*_k| - lambda / N_{k+1}).
 * @throws std::invalid_argument if estimates.size() != grid.size()
 */
[[nodiscard]] std::vector<double> omega_sequence(std::span<const double> estimates, const BandwidthGrid& grid);

/// (first j with omega_j >= lambda / N_j) - 1, or m when no index qualifies.
[[nodiscard]] std::size_t select_index(std::span<const double> omega, const BandwidthGrid& grid);

struct AdaptiveEstimate {
    double value = 0.0;
    std::size_t k_hat = 0;
    double h_hat = 0.0;
    std::vector<SequentialEstimate> grid_estimates;
    std::vector<double> omega_values;
};

/// Sequential estimates with H_j = n h_j on every grid point, then Lepskiĭ selection.
[[nodiscard]] AdaptiveEstimate adaptive_estimate(const Path& path, double z0, const BandwidthGrid& grid);

}  // namespace seqlep
