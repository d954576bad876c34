#pragma once

#include "seqlep/process_model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace seqlep {

/**
 * @brief Index range of design points inside the kernel support around z0.
 *
 * k_lo = floor(n z0 - n h) + 1 and k_hi = floor(n z0 + n h), both clamped to
 * [1, n]. The window is empty when k_lo > k_hi. The kernel is the indicator
 * of [-1, 1], so all kernel sums run over exactly these indices.
 */
struct KernelWindow {
    double z0 = 0.5;
    double h = 1.0;
    std::size_t n = 0;
    std::size_t k_lo = 1;
    std::size_t k_hi = 0;

    [[nodiscard]] bool empty() const noexcept { return k_lo > k_hi; }
    [[nodiscard]] bool contains(std::size_t k) const noexcept { return k >= k_lo && k <= k_hi; }
    [[nodiscard]] std::size_t size() const noexcept { return empty() ? 0 : k_hi - k_lo + 1; }
    /// u_k = (k/n - z0) / h.
    [[nodiscard]] double scaled_offset(std::size_t k) const noexcept {
        return (static_cast<double>(k) / static_cast<double>(n) - z0) / h;
    }
};

/// @throws std::invalid_argument if z0 is outside (0, 1), h <= 0 or n == 0
[[nodiscard]] KernelWindow make_window(std::size_t n, double z0, double h);

/// Indicator of the closed interval [-1, 1].
[[nodiscard]] inline double indicator_kernel(double u) noexcept { return (u >= -1.0 && u <= 1.0) ? 1.0 : 0.0; }

/**
 * @brief Accumulated squared observations A_0..A_n.
 *
 * A_k = sum over j <= k with j in the window of y_{j-1}^2; A_0 = 0. Summed in
 * ascending j with compensation.
 * @throws std::invalid_argument if the path and window disagree on n
 */
[[nodiscard]] std::vector<double> accumulate(const Path& path, const KernelWindow& window);

struct StoppingResult {
    std::optional<std::size_t> tau;
    std::optional<double> alpha;
    bool triggered = false;
    double A_n = 0.0;
};

/**
 * @brief First index at which the accumulated mass reaches H, with the
 * fractional weight on that index that makes the mass exactly H.
 *
 * When A_n < H nothing is triggered and tau/alpha are empty.
 */
[[nodiscard]] StoppingResult stopping_time(const Path& path, const KernelWindow& window, double H);

struct SequentialEstimate {
    double value = 0.0;
    std::optional<std::size_t> tau;
    std::optional<double> alpha;
    bool triggered = false;
    double A_n = 0.0;
    double H = 0.0;
};

/// Sequential kernel estimate of S(z0) with threshold H; 0 when not triggered.
[[nodiscard]] SequentialEstimate point_estimate(const Path& path, const KernelWindow& window, double H);

/**
 * @brief Split of the estimation error into bias and noise parts.
 *
 * bias_term = (1/H) * sum w_j (S(x_j) - S(z0)) y_{j-1}^2 and
 * noise_term = (1/sqrt(H)) * sum w_j y_{j-1} xi_j, where w_j = 1 before the
 * stopping index and alpha on it. With these,
 *   estimate - S(z0) = -S(z0) [not triggered] + (bias + noise / sqrt(H)) [triggered].
 * Both terms are 0 when not triggered.
 */
struct ErrorDecomposition {
    double bias_term = 0.0;
    double noise_term = 0.0;
    bool indicator = false;
    SequentialEstimate estimate;

    /// Right-hand side of the reconstruction identity, to compare with estimate.value - S(z0).
    [[nodiscard]] double reconstructed_error(double target_value) const noexcept;
};

/// Recomputes xi_j = y_j - S(x_j) y_{j-1} from the path.
[[nodiscard]] ErrorDecomposition decompose_error(const Path& path, const SignalFunction& signal,
                                                 const KernelWindow& window, double H);

/// tau(S) = 1 - S(z0)^2.
[[nodiscard]] double stationary_normalizer(const SignalFunction& signal);

/**
 * @brief Deviation of the kernel-weighted empirical second moment from its limit:
 *   (1/(n h)) sum_k f(u_k) y_{k-1}^2 - (1/tau(S)) * integral_{-1}^{1} f.
 *
 * f must vanish outside [-1, 1]; it is evaluated at every u_k, k = 1..n.
 */
[[nodiscard]] double delta_n(const Path& path, const std::function<double(double)>& f, double h,
                             const SignalFunction& signal);

}  // namespace seqlep
