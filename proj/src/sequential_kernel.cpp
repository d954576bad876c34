#include "seqlep/sequential_kernel.hpp"

#include "seqlep/numeric.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace seqlep {

namespace {

void check_threshold(double H) {
    if (!(H > 0.0) || !std::isfinite(H)) {
        throw std::invalid_argument("threshold H must be a positive finite number");
    }
}

void check_path_matches(const Path& path, const KernelWindow& window) {
    if (path.n() != window.n || path.values.size() != window.n + 1) {
        throw std::invalid_argument("path length does not match the kernel window");
    }
}

std::size_t clamp_index(double raw, std::size_t n) {
    if (raw < 1.0) {
        return 1;
    }
    if (raw > static_cast<double>(n)) {
        return n;
    }
    return static_cast<std::size_t>(raw);
}

}  // namespace

KernelWindow make_window(std::size_t n, double z0, double h) {
    if (n == 0) {
        throw std::invalid_argument("make_window: n must be positive");
    }
    if (!(z0 > 0.0 && z0 < 1.0)) {
        throw std::invalid_argument("make_window: z0 must lie in (0, 1)");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("make_window: h must be positive");
    }
    const double nd = static_cast<double>(n);
    const double lower = std::floor(nd * z0 - nd * h) + 1.0;
    const double upper = std::floor(nd * z0 + nd * h);

    KernelWindow w;
    w.z0 = z0;
    w.h = h;
    w.n = n;
    if (upper < 1.0 || lower > nd) {
        // Support lies entirely outside the design points.
        w.k_lo = 1;
        w.k_hi = 0;
        return w;
    }
    w.k_lo = clamp_index(lower, n);
    w.k_hi = clamp_index(upper, n);
    return w;
}

std::vector<double> accumulate(const Path& path, const KernelWindow& window) {
    check_path_matches(path, window);
    std::vector<double> A(window.n + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t k = 1; k <= window.n; ++k) {
        if (window.contains(k)) {
            const double y = path.values[k - 1];
            acc.add(y * y);
        }
        A[k] = acc.value();
    }
    return A;
}

StoppingResult stopping_time(const Path& path, const KernelWindow& window, double H) {
    check_threshold(H);
    check_path_matches(path, window);
    StoppingResult result;
    if (window.empty()) {
        return result;
    }
    CompensatedSum acc;
    double previous = 0.0;
    for (std::size_t k = window.k_lo; k <= window.k_hi; ++k) {
        const double y = path.values[k - 1];
        acc.add(y * y);
        const double current = acc.value();
        if (!result.triggered && current >= H) {
            const double increment = y * y;
            assert(current > previous && increment > 0.0);
            result.triggered = true;
            result.tau = k;
            result.alpha = (H - previous) / increment;
        }
        previous = current;
    }
    result.A_n = acc.value();
    return result;
}

SequentialEstimate point_estimate(const Path& path, const KernelWindow& window, double H) {
    const StoppingResult stop = stopping_time(path, window, H);
    SequentialEstimate est;
    est.H = H;
    est.A_n = stop.A_n;
    est.triggered = stop.triggered;
    est.tau = stop.tau;
    est.alpha = stop.alpha;
    if (!stop.triggered) {
        return est;
    }
    const std::size_t tau = *stop.tau;
    const auto& y = path.values;
    CompensatedSum numerator;
    for (std::size_t j = window.k_lo; j < tau; ++j) {
        numerator.add(y[j - 1] * y[j]);
    }
    numerator.add(*stop.alpha * y[tau - 1] * y[tau]);
    est.value = numerator.value() / H;
    return est;
}

double ErrorDecomposition::reconstructed_error(double target_value) const noexcept {
    if (!indicator) {
        return -target_value;
    }
    return bias_term + noise_term / std::sqrt(estimate.H);
}

ErrorDecomposition decompose_error(const Path& path, const SignalFunction& signal,
                                   const KernelWindow& window, double H) {
    ErrorDecomposition out;
    out.estimate = point_estimate(path, window, H);
    out.indicator = out.estimate.triggered;
    if (!out.indicator) {
        return out;
    }
    const std::size_t tau = *out.estimate.tau;
    const double alpha = *out.estimate.alpha;
    const double target = signal.at_target();
    const auto& y = path.values;

    CompensatedSum bias;
    CompensatedSum noise;
    for (std::size_t j = window.k_lo; j <= tau; ++j) {
        const double weight = (j == tau) ? alpha : 1.0;
        const double s = signal(path.design_point(j));
        const double xi = y[j] - s * y[j - 1];
        bias.add(weight * (s - target) * y[j - 1] * y[j - 1]);
        noise.add(weight * y[j - 1] * xi);
    }
    out.bias_term = bias.value() / H;
    out.noise_term = noise.value() / std::sqrt(H);
    return out;
}

double stationary_normalizer(const SignalFunction& signal) {
    const double s = signal.at_target();
    return 1.0 - s * s;
}

double delta_n(const Path& path, const std::function<double(double)>& f, double h,
               const SignalFunction& signal) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("delta_n: h must be positive");
    }
    const std::size_t n = path.n();
    CompensatedSum acc;
    for (std::size_t k = 1; k <= n; ++k) {
        const double u = (path.design_point(k) - signal.z0) / h;
        const double weight = f(u);
        if (weight != 0.0) {
            const double y = path.values[k - 1];
            acc.add(weight * y * y);
        }
    }
    const double empirical = acc.value() / (static_cast<double>(n) * h);
    return empirical - integrate(f, -1.0, 1.0) / stationary_normalizer(signal);
}

}  // namespace seqlep
