#include "seqlep/process_model.hpp"

#include "seqlep/noise_stream.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqlep {

SignalFunction make_benchmark_signal(double beta, double z0) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("benchmark signal: beta must lie in (0, 1], got " + std::to_string(beta));
    }
    if (!(z0 > 0.0 && z0 < 1.0)) {
        throw std::invalid_argument("benchmark signal: z0 must lie in (0, 1), got " + std::to_string(z0));
    }
    SignalFunction s;
    s.evaluator = [beta, z0](double x) { return std::pow(std::fabs(x - z0), beta); };
    s.beta = beta;
    s.holder_K = 1.0;
    s.z0 = z0;
    // |x - z0|^beta is maximal at an endpoint of [0, 1].
    s.eps = 1.0 - std::pow(std::max(z0, 1.0 - z0), beta);
    return s;
}

SignalFunction make_constant_signal(double c, double z0, double beta) {
    if (!(std::fabs(c) < 1.0)) {
        throw std::invalid_argument("constant signal: |c| must be < 1, got " + std::to_string(c));
    }
    if (!(z0 > 0.0 && z0 < 1.0)) {
        throw std::invalid_argument("constant signal: z0 must lie in (0, 1), got " + std::to_string(z0));
    }
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("constant signal: beta must lie in (0, 1], got " + std::to_string(beta));
    }
    SignalFunction s;
    s.evaluator = [c](double) { return c; };
    s.beta = beta;
    s.holder_K = 1.0;
    s.z0 = z0;
    s.eps = 1.0 - std::fabs(c);
    return s;
}

double sup_norm(const SignalFunction& signal, std::size_t grid_size) {
    double best = 0.0;
    for (std::size_t i = 1; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size);
        best = std::max(best, std::fabs(signal(x)));
    }
    return best;
}

bool is_stable(const SignalFunction& signal, std::size_t grid_size) {
    return sup_norm(signal, grid_size) <= (1.0 - signal.eps) * (1.0 + 1e-12);
}

double empirical_holder_constant(const SignalFunction& signal, std::size_t grid_size) {
    if (grid_size < 10) {
        throw std::invalid_argument("empirical_holder_constant: grid_size must be >= 10");
    }
    const double target = signal.at_target();
    double best = 0.0;
    for (std::size_t i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid_size);
        const double distance = std::fabs(x - signal.z0);
        if (distance == 0.0) {
            continue;
        }
        best = std::max(best, std::fabs(signal(x) - target) / std::pow(distance, signal.beta));
    }
    return best;
}

bool in_holder_class(const SignalFunction& signal, std::size_t grid_size) {
    return is_stable(signal, grid_size) &&
           empirical_holder_constant(signal, grid_size) <= signal.holder_K * (1.0 + 1e-12);
}

Path simulate_path(const SignalFunction& signal, const PathConfig& config) {
    if (config.n < 2) {
        throw std::invalid_argument("simulate_path: n must be >= 2");
    }
    Path path;
    path.config = config;
    path.values.resize(config.n + 1);
    path.values[0] = 0.0;
    NoiseStream noise(config.seed, config.replication_index);
    for (std::size_t k = 1; k <= config.n; ++k) {
        path.values[k] = signal(path.design_point(k)) * path.values[k - 1] + noise.next();
    }
    return path;
}

std::vector<double> recover_noise(const Path& path, const SignalFunction& signal) {
    std::vector<double> xi(path.values.size(), 0.0);
    for (std::size_t k = 1; k < path.values.size(); ++k) {
        xi[k] = path.values[k] - signal(path.design_point(k)) * path.values[k - 1];
    }
    return xi;
}

}  // namespace seqlep
