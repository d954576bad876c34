#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace seqlep {

/**
 * @brief Autoregression coefficient function S with its smoothness metadata.
 *
 * The evaluator is only ever queried on (0, 1]. The metadata describes the
 * class the function is claimed to belong to: sup|S| <= 1 - eps and
 * |S(x) - S(z0)| <= holder_K * |x - z0|^beta.
 */
struct SignalFunction {
    std::function<double(double)> evaluator;
    double beta = 1.0;
    double holder_K = 1.0;
    double z0 = 0.5;
    double eps = 0.5;

    [[nodiscard]] double operator()(double x) const { return evaluator(x); }
    [[nodiscard]] double at_target() const { return evaluator(z0); }
};

/// S(x) = |x - z0|^beta with K = 1 and the largest admissible eps.
[[nodiscard]] SignalFunction make_benchmark_signal(double beta, double z0);

/// S(x) = c. Hölder constant 0 for any beta; eps = 1 - |c|.
[[nodiscard]] SignalFunction make_constant_signal(double c, double z0, double beta = 1.0);

/// Default grid resolution for class-membership checks.
inline constexpr std::size_t kDefaultCheckGrid = 10'000;

/// max |S(x)| over x_i = i / grid_size, i = 1..grid_size.
[[nodiscard]] double sup_norm(const SignalFunction& signal, std::size_t grid_size = kDefaultCheckGrid);

/// Grid check of sup|S| <= 1 - eps.
[[nodiscard]] bool is_stable(const SignalFunction& signal, std::size_t grid_size = kDefaultCheckGrid);

/**
 * @brief max over grid points x != z0 of |S(x) - S(z0)| / |x - z0|^beta.
 *
 * The grid is x_i = i / grid_size for i = 0..grid_size (x = 0 included so
 * the supremum over [0, 1] is covered; S is evaluated at 0 only here).
 * @throws std::invalid_argument if grid_size < 10
 */
[[nodiscard]] double empirical_holder_constant(const SignalFunction& signal,
                                               std::size_t grid_size = kDefaultCheckGrid);

/// Stability plus empirical Hölder constant <= holder_K (relative slack 1e-12).
[[nodiscard]] bool in_holder_class(const SignalFunction& signal,
                                   std::size_t grid_size = kDefaultCheckGrid);

struct PathConfig {
    std::size_t n = 2;
    std::uint64_t seed = 0;
    std::uint64_t replication_index = 0;
};

/// One trajectory y_0..y_n; values.size() == config.n + 1 and values[0] == 0.
struct Path {
    std::vector<double> values;
    PathConfig config;

    [[nodiscard]] std::size_t n() const noexcept { return config.n; }
    [[nodiscard]] double design_point(std::size_t k) const noexcept {
        return static_cast<double>(k) / static_cast<double>(config.n);
    }
};

/**
 * @brief Simulate y_k = S(k/n) y_{k-1} + xi_k, y_0 = 0, k = 1..n.
 *
 * xi_k is the k-th draw of NoiseStream(config.seed, config.replication_index).
 * @throws std::invalid_argument if config.n < 2
 */
[[nodiscard]] Path simulate_path(const SignalFunction& signal, const PathConfig& config);

/// xi_k = y_k - S(x_k) y_{k-1}, k = 1..n; index 0 holds 0.
[[nodiscard]] std::vector<double> recover_noise(const Path& path, const SignalFunction& signal);

}  // namespace seqlep
