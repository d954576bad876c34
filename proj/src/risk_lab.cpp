#include "seqlep/risk_lab.hpp"

#include "seqlep/numeric.hpp"
#include "seqlep/parallel.hpp"
#include "seqlep/sequential_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace seqlep {

namespace {

constexpr std::uint64_t kRiskDomain = tag_hash("risk");
constexpr std::uint64_t kTailDomain = tag_hash("tail");
constexpr std::uint64_t kMomentDomain = tag_hash("moments");
constexpr std::uint64_t kStoppingDomain = tag_hash("stopping");
constexpr std::uint64_t kLowerBoundDomain = tag_hash("lowerbound");

std::uint64_t double_bits(double x) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    return bits;
}

void require_replications(std::size_t M) {
    if (M == 0) {
        throw std::invalid_argument("replication count M must be at least 1");
    }
}

}  // namespace

double GridConfig::effective_lambda() const { return lambda ? *lambda : default_lambda(K, beta_lo); }

BandwidthGrid GridConfig::build(std::size_t n) const { return build_grid(n, beta_lo, beta_hi, lambda, K); }

double SampleSummary::standard_error() const {
    return count == 0 ? 0.0 : std::sqrt(variance / static_cast<double>(count));
}

SampleSummary summarize(std::span<const double> samples) {
    SampleSummary s;
    s.count = samples.size();
    if (samples.empty()) {
        return s;
    }
    s.mean = compensated_sum(samples) / static_cast<double>(s.count);
    if (s.count > 1) {
        CompensatedSum squares;
        for (const double x : samples) {
            squares.add((x - s.mean) * (x - s.mean));
        }
        s.variance = squares.value() / static_cast<double>(s.count - 1);
    }
    return s;
}

// ---------------------------------------------------------------------------

std::size_t RiskRow::khat_mode() const {
    const auto it = std::max_element(khat_histogram.begin(), khat_histogram.end());
    return it == khat_histogram.end() ? 0 : static_cast<std::size_t>(it - khat_histogram.begin());
}

std::uint64_t risk_path_seed(std::uint64_t master_seed, std::size_t n) {
    return derive_seed(master_seed, {kRiskDomain, static_cast<std::uint64_t>(n)});
}

RiskReport monte_carlo_risk(const RiskExperiment& experiment, std::size_t workers) {
    require_replications(experiment.M);
    for (const std::size_t n : experiment.n_list) {
        if (n < 3) {
            throw std::invalid_argument("monte_carlo_risk: every n must be at least 3");
        }
    }

    struct Replication {
        double abs_error = 0.0;
        std::size_t k_hat = 0;
    };

    RiskReport report;
    report.scenario_id = experiment.scenario_id;
    report.beta = experiment.signal.beta;
    report.z0 = experiment.signal.z0;
    const double target = experiment.signal.at_target();

    for (const std::size_t n : experiment.n_list) {
        const BandwidthGrid grid = experiment.grid.build(n);
        const std::uint64_t seed = risk_path_seed(experiment.master_seed, n);
        const auto reps = run_indexed<Replication>(experiment.M, workers, [&](std::size_t r) {
            const Path path = simulate_path(experiment.signal, PathConfig{n, seed, r});
            const AdaptiveEstimate est = adaptive_estimate(path, experiment.signal.z0, grid);
            return Replication{std::fabs(est.value - target), est.k_hat};
        });

        RiskRow row;
        row.n = n;
        row.M = experiment.M;
        row.lambda = grid.lambda;
        row.khat_histogram.assign(grid.size(), 0);
        std::vector<double> errors;
        errors.reserve(reps.size());
        for (const auto& rep : reps) {
            errors.push_back(rep.abs_error);
            ++row.khat_histogram[rep.k_hat];
        }
        const SampleSummary summary = summarize(errors);
        row.R_n = summary.mean;
        row.standard_error = summary.standard_error();
        row.rate_N = adaptive_rate(n, experiment.signal.beta);
        row.normalized = row.rate_N * row.R_n;
        report.rows.push_back(std::move(row));
    }
    return report;
}

double rate_stability(std::span<const double> normalized) {
    if (normalized.empty()) {
        throw std::invalid_argument("rate_stability: no rows");
    }
    const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
    return *hi / *lo;
}

double rate_stability(const RiskReport& report) {
    std::vector<double> normalized;
    for (const auto& row : report.rows) {
        normalized.push_back(row.normalized);
    }
    return rate_stability(normalized);
}

// ---------------------------------------------------------------------------

double TailCheckReport::triggered_fraction() const {
    return M == 0 ? 0.0 : static_cast<double>(triggered) / static_cast<double>(M);
}

bool TailCheckReport::variance_in_band(double lo, double hi) const {
    return zeta.variance >= lo && zeta.variance <= hi;
}

bool TailCheckReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const TailRow& r) { return r.pass; });
}

TailCheckReport tail_suite(const SignalFunction& signal, std::size_t n, double h, std::size_t M,
                           std::span<const double> z_list, std::uint64_t seed, std::size_t workers) {
    require_replications(M);
    for (const double z : z_list) {
        if (!(z >= 2.0)) {
            throw std::invalid_argument("tail_suite: every z must be >= 2");
        }
    }
    const KernelWindow window = make_window(n, signal.z0, h);
    const double H = static_cast<double>(n) * h;
    const std::uint64_t path_seed = derive_seed(seed, {kTailDomain, n, double_bits(h)});

    struct Replication {
        bool triggered = false;
        double zeta = 0.0;
    };
    const auto reps = run_indexed<Replication>(M, workers, [&](std::size_t r) {
        const Path path = simulate_path(signal, PathConfig{n, path_seed, r});
        const ErrorDecomposition d = decompose_error(path, signal, window, H);
        return Replication{d.indicator, d.noise_term};
    });

    TailCheckReport report;
    report.n = n;
    report.h = h;
    report.H = H;
    report.M = M;
    std::vector<double> zetas;
    for (const auto& rep : reps) {
        if (rep.triggered) {
            zetas.push_back(rep.zeta);
        }
    }
    report.triggered = zetas.size();
    report.zeta = summarize(zetas);

    const double count = static_cast<double>(zetas.size());
    for (const double z : z_list) {
        TailRow row;
        row.z = z;
        row.bound = 2.0 * std::exp(-z * z / 8.0);
        row.sharp_bound = 2.0 * std::sqrt(2.0 / std::numbers::pi) * std::exp(-z * z / 8.0);
        const auto exceed = std::count_if(zetas.begin(), zetas.end(), [z](double v) { return std::fabs(v) > z; });
        row.empirical = zetas.empty() ? 0.0 : static_cast<double>(exceed) / count;
        row.margin = zetas.empty() ? 0.0 : 3.0 * std::sqrt(row.empirical * (1.0 - row.empirical) / count);
        row.pass = !zetas.empty() && row.empirical <= row.bound;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------

double moment_bound(int t, double eps) {
    // (2t)! / (2^t t!) = (2t - 1)!!
    double double_factorial = 1.0;
    for (int i = 2 * t - 1; i > 1; i -= 2) {
        double_factorial *= i;
    }
    return double_factorial * std::pow(1.0 / eps, 2 * t);
}

bool MomentReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const MomentRow& r) { return r.pass; });
}

std::vector<double> MomentReport::second_moments() const {
    std::vector<double> out;
    for (const auto& row : rows) {
        if (row.order == 2) {
            out.push_back(row.empirical);
        }
    }
    return out;
}

MomentReport moment_suite(const SignalFunction& signal, std::size_t n, std::size_t M, std::uint64_t seed,
                          std::size_t workers) {
    require_replications(M);
    const std::uint64_t path_seed = derive_seed(seed, {kMomentDomain, n});
    const std::size_t blocks = (M + kReplicationBlock - 1) / kReplicationBlock;

    // Per block: power sums of y_k^2, y_k^4, y_k^8 for k = 1..n.
    struct BlockSums {
        std::vector<double> p2, p4, p8;
    };
    const auto partials = run_indexed<BlockSums>(blocks, workers, [&](std::size_t b) {
        BlockSums sums{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
        const std::size_t first = b * kReplicationBlock;
        const std::size_t last = std::min(M, first + kReplicationBlock);
        for (std::size_t r = first; r < last; ++r) {
            const Path path = simulate_path(signal, PathConfig{n, path_seed, r});
            for (std::size_t k = 1; k <= n; ++k) {
                const double y2 = path.values[k] * path.values[k];
                const double y4 = y2 * y2;
                sums.p2[k - 1] += y2;
                sums.p4[k - 1] += y4;
                sums.p8[k - 1] += y4 * y4;
            }
        }
        return sums;
    });

    MomentReport report;
    report.n = n;
    report.M = M;
    report.eps = signal.eps;
    const double md = static_cast<double>(M);
    const double bound2 = moment_bound(1, signal.eps);
    const double bound4 = moment_bound(2, signal.eps);
    for (std::size_t k = 1; k <= n; ++k) {
        CompensatedSum s2, s4, s8;
        for (const auto& block : partials) {
            s2.add(block.p2[k - 1]);
            s4.add(block.p4[k - 1]);
            s8.add(block.p8[k - 1]);
        }
        const double m2 = s2.value() / md;
        const double m4 = s4.value() / md;
        const double m8 = s8.value() / md;
        const double se2 = std::sqrt(std::max(0.0, m4 - m2 * m2) / md);
        const double se4 = std::sqrt(std::max(0.0, m8 - m4 * m4) / md);
        report.rows.push_back({k, 2, bound2, m2, se2, m2 - 3.0 * se2 <= bound2});
        report.rows.push_back({k, 4, bound4, m4, se4, m4 - 3.0 * se4 <= bound4});
    }
    return report;
}

// ---------------------------------------------------------------------------

double BandwidthRule::bandwidth(std::size_t n) const {
    return kind == Kind::fixed ? value : rate_bandwidth(n, value);
}

StoppingReport stopping_suite(const SignalFunction& signal, std::span<const std::size_t> n_list,
                              std::span<const BandwidthRule> rules, std::size_t M, std::uint64_t seed,
                              std::size_t workers) {
    require_replications(M);
    StoppingReport report;
    for (const auto& rule : rules) {
        for (const std::size_t n : n_list) {
            const double h = rule.bandwidth(n);
            const double H = static_cast<double>(n) * h;
            const KernelWindow window = make_window(n, signal.z0, h);
            const std::uint64_t path_seed = derive_seed(seed, {kStoppingDomain, n});
            const auto fired = run_indexed<char>(M, workers, [&](std::size_t r) -> char {
                const Path path = simulate_path(signal, PathConfig{n, path_seed, r});
                return stopping_time(path, window, H).triggered ? 1 : 0;
            });
            StoppingRow row;
            row.n = n;
            row.h = h;
            row.H = H;
            row.M = M;
            row.untriggered = static_cast<std::size_t>(std::count(fired.begin(), fired.end(), 0));
            row.frequency = static_cast<double>(row.untriggered) / static_cast<double>(M);
            row.standard_error = std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(M));
            report.rows.push_back(row);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

double beta_bar(double beta_lo, double beta_hi) {
    return (beta_hi - beta_lo) / ((2.0 * beta_hi + 1.0) * (2.0 * beta_lo + 1.0));
}

double bump(double u) {
    if (!(std::fabs(u) < 1.0)) {
        return 0.0;
    }
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double PerturbationProfile::operator()(double u) const { return bump(u / width); }

PerturbationProfile make_perturbation_profile(double beta_lo, double beta_hi) {
    if (!(beta_lo > 0.0 && beta_lo < beta_hi && beta_hi <= 1.0)) {
        throw std::invalid_argument("perturbation profile: need 0 < beta_lo < beta_hi <= 1");
    }
    PerturbationProfile p;
    p.target_energy = beta_bar(beta_lo, beta_hi) / 2.0;
    p.bump_energy = integrate([](double u) { return bump(u) * bump(u); }, -1.0, 1.0);
    p.width = p.target_energy / p.bump_energy;
    return p;
}

SignalFunction perturbation_signal(double beta_lo, double beta_hi, std::size_t n, double z0) {
    const PerturbationProfile profile = make_perturbation_profile(beta_lo, beta_hi);
    const double h_star = rate_bandwidth(n, beta_lo);
    const double N_star = adaptive_rate(n, beta_lo);
    if (!(z0 - profile.width * h_star > 0.0 && z0 + profile.width * h_star < 1.0)) {
        throw std::invalid_argument("perturbation support leaves (0, 1) around z0");
    }
    SignalFunction s;
    s.evaluator = [profile, h_star, N_star, z0](double y) { return profile((y - z0) / h_star) / N_star; };
    s.beta = beta_lo;
    s.z0 = z0;
    s.eps = 1.0 - 1.0 / N_star;
    s.holder_K = empirical_holder_constant(s, 100'000);
    return s;
}

SampleSummary LowerBoundDiagnostic::varsigma_summary() const { return summarize(varsigma_sq_samples); }
SampleSummary LowerBoundDiagnostic::eta_summary() const { return summarize(eta_samples); }

LowerBoundDiagnostic lower_bound_diagnostic(double beta_lo, double beta_hi, std::size_t n, std::size_t M,
                                            double z0, std::uint64_t seed, std::size_t workers) {
    require_replications(M);
    const PerturbationProfile profile = make_perturbation_profile(beta_lo, beta_hi);
    const SignalFunction signal = perturbation_signal(beta_lo, beta_hi, n, z0);

    LowerBoundDiagnostic out;
    out.n = n;
    out.M = M;
    out.beta_bar = beta_bar(beta_lo, beta_hi);
    out.sigma_star_sq = out.beta_bar / 2.0;
    out.V_width = profile.width;
    out.h_star = rate_bandwidth(n, beta_lo);
    out.N_star = adaptive_rate(n, beta_lo);

    const double d_n = effective_sample_size(n);
    const double nd = static_cast<double>(n);
    const std::uint64_t path_seed = derive_seed(seed, {kLowerBoundDomain, n});

    struct Replication {
        double varsigma_sq = 0.0;
        double score = 0.0;
    };
    const auto reps = run_indexed<Replication>(M, workers, [&](std::size_t r) {
        const Path path = simulate_path(signal, PathConfig{n, path_seed, r});
        CompensatedSum energy;
        CompensatedSum score;
        for (std::size_t k = 1; k <= n; ++k) {
            const double v = profile((path.design_point(k) - z0) / out.h_star);
            if (v == 0.0) {
                continue;
            }
            const double y_prev = path.values[k - 1];
            const double xi = path.values[k] - signal(path.design_point(k)) * y_prev;
            energy.add(v * v * y_prev * y_prev);
            score.add(v * y_prev * xi);
        }
        return Replication{energy.value() / (d_n * out.h_star), score.value()};
    });

    for (const auto& rep : reps) {
        if (rep.varsigma_sq < 1e-12) {
            ++out.rejected;
            continue;
        }
        out.varsigma_sq_samples.push_back(d_n / nd * rep.varsigma_sq);
        out.eta_samples.push_back(rep.score / (std::sqrt(d_n * out.h_star) * std::sqrt(rep.varsigma_sq)));
    }
    return out;
}

}  // namespace seqlep
