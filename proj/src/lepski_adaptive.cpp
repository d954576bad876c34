#include "seqlep/lepski_adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace seqlep {

double effective_sample_size(std::size_t n) {
    if (n <= 2) {
        throw std::invalid_argument("sample size must be at least 3");
    }
    const double nd = static_cast<double>(n);
    return nd / std::log(nd);
}

double rate_bandwidth(std::size_t n, double beta) {
    return std::pow(effective_sample_size(n), -1.0 / (2.0 * beta + 1.0));
}

double adaptive_rate(std::size_t n, double beta) {
    return std::pow(effective_sample_size(n), beta / (2.0 * beta + 1.0));
}

double default_lambda(double K, double beta_lo) {
    if (!(K > 0.0)) {
        throw std::invalid_argument("default_lambda: K must be positive");
    }
    if (!(beta_lo > 0.0 && beta_lo <= 1.0)) {
        throw std::invalid_argument("default_lambda: beta_lo must lie in (0, 1]");
    }
    return 1.01 * (K + std::numbers::e * std::sqrt(4.0 + 4.0 / (2.0 * beta_lo + 1.0)));
}

BandwidthGrid build_grid(std::size_t n, double beta_lo, double beta_hi, std::optional<double> lambda_override,
                         double K) {
    if (n <= 2) {
        throw std::invalid_argument("build_grid: n must be at least 3");
    }
    if (!(beta_lo > 0.0 && beta_lo < beta_hi && beta_hi <= 1.0)) {
        throw std::invalid_argument("build_grid: need 0 < beta_lo < beta_hi <= 1");
    }
    if (lambda_override && !(*lambda_override > 0.0)) {
        throw std::invalid_argument("build_grid: lambda must be positive");
    }

    BandwidthGrid grid;
    grid.n = n;
    grid.d_n = effective_sample_size(n);
    grid.m = static_cast<std::size_t>(std::floor(std::log(grid.d_n))) + 1;
    grid.beta_lo = beta_lo;
    grid.beta_hi = beta_hi;
    grid.lambda = lambda_override ? *lambda_override : default_lambda(K, beta_lo);

    const double md = static_cast<double>(grid.m);
    const double span = beta_hi - beta_lo;
    for (std::size_t k = 0; k <= grid.m; ++k) {
        const double beta = beta_lo + (static_cast<double>(k) / md) * span;
        grid.beta_points.push_back(beta);
        grid.h_points.push_back(std::pow(grid.d_n, -1.0 / (2.0 * beta + 1.0)));
        grid.N_points.push_back(std::pow(grid.d_n, beta / (2.0 * beta + 1.0)));
    }
    const double beta_next = std::min(1.0, beta_lo + ((md + 1.0) / md) * span);
    grid.N_points.push_back(std::pow(grid.d_n, beta_next / (2.0 * beta_next + 1.0)));
    return grid;
}

std::vector<double> omega_sequence(std::span<const double> estimates, const BandwidthGrid& grid) {
    if (estimates.size() != grid.size()) {
        throw std::invalid_argument("omega_sequence: need one estimate per grid point");
    }
    std::vector<double> omega(estimates.size());
    for (std::size_t j = 0; j < estimates.size(); ++j) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k <= j; ++k) {
            best = std::max(best, std::fabs(estimates[j] - estimates[k]) - grid.lambda / grid.N_points[k + 1]);
        }
        omega[j] = best;
    }
    return omega;
}

std::size_t select_index(std::span<const double> omega, const BandwidthGrid& grid) {
    if (omega.size() != grid.size()) {
        throw std::invalid_argument("select_index: need one omega value per grid point");
    }
    for (std::size_t j = 0; j < omega.size(); ++j) {
        if (omega[j] >= grid.threshold(j)) {
            // omega_0 = -lambda/N_1 < 0, so j >= 1 here.
            return j == 0 ? 0 : j - 1;
        }
    }
    return grid.m;
}

AdaptiveEstimate adaptive_estimate(const Path& path, double z0, const BandwidthGrid& grid) {
    if (path.n() != grid.n) {
        throw std::invalid_argument("adaptive_estimate: path and grid disagree on n");
    }
    AdaptiveEstimate out;
    out.grid_estimates.reserve(grid.size());
    std::vector<double> values;
    values.reserve(grid.size());
    const double nd = static_cast<double>(grid.n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double h = grid.h_points[j];
        const KernelWindow window = make_window(grid.n, z0, h);
        out.grid_estimates.push_back(point_estimate(path, window, nd * h));
        values.push_back(out.grid_estimates.back().value);
    }
    out.omega_values = omega_sequence(values, grid);
    out.k_hat = select_index(out.omega_values, grid);
    out.h_hat = grid.h_points[out.k_hat];
    out.value = values[out.k_hat];
    return out;
}

}  // namespace seqlep
