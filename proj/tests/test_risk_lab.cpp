#include "seqlep/risk_lab.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace seqlep {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752;

// Composite Simpson rule; independent of the library quadrature.
template <class F>
double simpson(F f, double a, double b, std::size_t intervals) {
    const double step = (b - a) / static_cast<double>(intervals);
    double total = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        total += (i % 2 == 1 ? 4.0 : 2.0) * f(a + step * static_cast<double>(i));
    }
    return total * step / 3.0;
}

RiskExperiment small_experiment() {
    RiskExperiment e;
    e.scenario_id = "small";
    e.n_list = {100, 400};
    e.M = 300;
    e.signal = make_benchmark_signal(0.7, kInvSqrt2);
    e.grid = GridConfig{0.6, 0.8, 1.0, std::nullopt};
    e.master_seed = 11;
    return e;
}

TEST(SampleSummary, MeanAndUnbiasedVariance) {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const SampleSummary s = summarize(x);
    EXPECT_EQ(s.count, 4u);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.standard_error(), std::sqrt(5.0 / 12.0));
    EXPECT_EQ(summarize(std::vector<double>{}).count, 0u);
}

TEST(RateStability, PublishedTables) {
    const std::vector<std::size_t> ns{100, 1000, 5000, 10000};
    auto normalized = [&](double beta, const std::vector<double>& risks) {
        std::vector<double> out;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            out.push_back(adaptive_rate(ns[i], beta) * risks[i]);
        }
        return out;
    };
    const auto first = normalized(0.7, {0.284, 0.154, 0.101, 0.087});
    EXPECT_NEAR(first[0], 0.6969554450856945, 1e-12);
    EXPECT_NEAR(first[1], 0.6572250563775578, 1e-12);
    EXPECT_NEAR(first[2], 0.6484121534226601, 1e-12);
    EXPECT_NEAR(first[3], 0.6682498130713358, 1e-12);
    EXPECT_NEAR(rate_stability(first), 1.0748648701397674, 1e-12);

    const auto second = normalized(1.0, {0.201, 0.097, 0.058, 0.047});
    EXPECT_NEAR(second[0], 0.5607649094484515, 1e-12);
    EXPECT_NEAR(second[1], 0.5093223721567207, 1e-12);
    EXPECT_NEAR(second[3], 0.48306543640694033, 1e-12);
    EXPECT_LT(rate_stability(second), 1.25);

    EXPECT_EQ(rate_stability(std::vector<double>{0.42}), 1.0);
    EXPECT_THROW((void)rate_stability(std::vector<double>{}), std::invalid_argument);
}

TEST(MonteCarloRisk, IndependentOfWorkerCount) {
    const RiskExperiment e = small_experiment();
    const RiskReport one = monte_carlo_risk(e, 1);
    const RiskReport many = monte_carlo_risk(e, 5);
    ASSERT_EQ(one.rows.size(), many.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        EXPECT_EQ(one.rows[i].R_n, many.rows[i].R_n);
        EXPECT_EQ(one.rows[i].standard_error, many.rows[i].standard_error);
        EXPECT_EQ(one.rows[i].khat_histogram, many.rows[i].khat_histogram);
    }
}

TEST(MonteCarloRisk, SingleReplicationIsAbsoluteError) {
    RiskExperiment e = small_experiment();
    e.M = 1;
    e.n_list = {100};
    const RiskReport report = monte_carlo_risk(e);
    const Path p = simulate_path(e.signal, {100, risk_path_seed(e.master_seed, 100), 0});
    const AdaptiveEstimate est = adaptive_estimate(p, kInvSqrt2, e.grid.build(100));
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(report.rows[0].R_n, std::fabs(est.value - e.signal.at_target()));
    EXPECT_EQ(report.rows[0].khat_histogram[est.k_hat], 1u);
}

TEST(MonteCarloRisk, RowFieldsAreConsistent) {
    const RiskReport report = monte_carlo_risk(small_experiment());
    for (const auto& row : report.rows) {
        EXPECT_GE(row.R_n, 0.0);
        EXPECT_GT(row.standard_error, 0.0);
        EXPECT_DOUBLE_EQ(row.rate_N, adaptive_rate(row.n, 0.7));
        EXPECT_DOUBLE_EQ(row.normalized, row.rate_N * row.R_n);
        std::size_t total = 0;
        for (const auto c : row.khat_histogram) {
            total += c;
        }
        EXPECT_EQ(total, row.M);
        EXPECT_EQ(row.lambda, default_lambda(1.0, 0.6));
    }
    EXPECT_THROW((void)monte_carlo_risk([] {
                     auto e = small_experiment();
                     e.M = 0;
                     return e;
                 }()),
                 std::invalid_argument);
}

TEST(MonteCarloRisk, NoiseOnlySignalRiskShrinks) {
    RiskExperiment e = small_experiment();
    e.signal = make_constant_signal(0.0, kInvSqrt2);
    e.n_list = {100, 1000, 10000};
    e.M = 400;
    const RiskReport report = monte_carlo_risk(e);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        // Noise scale of the largest-bandwidth estimate, 1/sqrt(n h_0), bounds the mean error loosely.
        const double scale = 1.0 / std::sqrt(static_cast<double>(row.n) * e.grid.build(row.n).h_points[0]);
        EXPECT_LT(row.R_n, 2.0 * scale);
        if (i > 0) {
            EXPECT_LT(row.R_n, report.rows[i - 1].R_n);
        }
    }
}

TEST(TailSuite, BoundsAndFrequencies) {
    const SignalFunction s = make_benchmark_signal(0.7, kInvSqrt2);
    const std::vector<double> z{2.0, 2.5, 3.0};
    const TailCheckReport report = tail_suite(s, 1000, rate_bandwidth(1000, 0.7), 4000, z, 3);
    ASSERT_EQ(report.rows.size(), 3u);
    EXPECT_NEAR(report.rows[0].bound, 1.2130613194252668, 1e-12);
    EXPECT_NEAR(report.rows[1].bound, 0.9156667235432285, 1e-12);
    EXPECT_NEAR(report.rows[2].bound, 0.6493049347166995, 1e-12);
    EXPECT_NEAR(report.rows[2].sharp_bound, 2.0 * std::sqrt(2.0 / std::numbers::pi) * std::exp(-9.0 / 8.0), 1e-15);
    EXPECT_TRUE(report.all_pass());
    EXPECT_FALSE(report.underpowered());
    EXPECT_TRUE(report.variance_in_band());
    // Normal-tail oracle for z = 3: P(|N(0,1)| > 3) = 0.0027.
    EXPECT_LT(report.rows[2].empirical, 0.0027 + 4.0 * std::sqrt(0.0027 / 4000.0));
}

TEST(TailSuite, FlagsUnderpoweredAndRejectsSmallZ) {
    const SignalFunction s = make_benchmark_signal(0.7, kInvSqrt2);
    const std::vector<double> z{2.0};
    const TailCheckReport report = tail_suite(s, 200, 2.0, 50, z, 3);
    EXPECT_TRUE(report.underpowered());
    EXPECT_FALSE(report.all_pass());
    const std::vector<double> bad{1.5};
    EXPECT_THROW((void)tail_suite(s, 200, 0.1, 10, bad, 3), std::invalid_argument);
}

TEST(MomentSuite, BoundValues) {
    EXPECT_DOUBLE_EQ(moment_bound(1, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(moment_bound(2, 0.5), 48.0);
    EXPECT_DOUBLE_EQ(moment_bound(3, 1.0), 15.0);
    EXPECT_NEAR(moment_bound(1, make_benchmark_signal(0.7, kInvSqrt2).eps), 21.54986133867752, 1e-9);
}

TEST(MomentSuite, ConstantSignals) {
    const MomentReport half = moment_suite(make_constant_signal(0.5, 0.5), 100, 3000, 1, 2);
    EXPECT_TRUE(half.all_pass());
    ASSERT_EQ(half.rows.size(), 200u);
    EXPECT_EQ(half.rows[0].bound, 4.0);
    EXPECT_EQ(half.rows[1].bound, 48.0);

    const MomentReport zero = moment_suite(make_constant_signal(0.0, 0.5), 50, 3000, 1);
    EXPECT_TRUE(zero.all_pass());
    for (const MomentRow& row : zero.rows) {
        if (row.order == 2) {
            EXPECT_NEAR(row.empirical, 1.0, 5.0 * row.standard_error);
        }
    }
}

TEST(MomentSuite, IndependentOfWorkerCount) {
    const SignalFunction s = make_benchmark_signal(0.7, kInvSqrt2);
    const MomentReport a = moment_suite(s, 80, 700, 9, 1);
    const MomentReport b = moment_suite(s, 80, 700, 9, 3);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].empirical, b.rows[i].empirical);
    }
}

TEST(StoppingSuite, HugeThresholdRarelyTriggers) {
    const SignalFunction s = make_benchmark_signal(0.7, kInvSqrt2);
    const std::vector<std::size_t> ns{500};
    const std::vector<BandwidthRule> rules{BandwidthRule::fixed(2.0)};
    const StoppingReport report = stopping_suite(s, ns, rules, 500, 1);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_GT(report.rows[0].frequency, 0.95);
    EXPECT_DOUBLE_EQ(report.rows[0].H, 1000.0);
}

TEST(StoppingSuite, RateBandwidthTriggersAtLargeN) {
    const SignalFunction s = make_benchmark_signal(0.7, kInvSqrt2);
    const std::vector<std::size_t> ns{10'000};
    const std::vector<BandwidthRule> rules{BandwidthRule::rate(0.7)};
    const StoppingReport report = stopping_suite(s, ns, rules, 500, 1);
    EXPECT_DOUBLE_EQ(report.rows[0].h, rate_bandwidth(10'000, 0.7));
    EXPECT_LT(report.rows[0].frequency, 0.05);
}

TEST(StoppingSuite, FixedBandwidthDoublingN) {
    const SignalFunction s = make_benchmark_signal(0.7, kInvSqrt2);
    const std::vector<std::size_t> ns{25, 50, 100, 200, 400};
    const std::vector<BandwidthRule> rules{BandwidthRule::fixed(0.05)};
    const StoppingReport report = stopping_suite(s, ns, rules, 2000, 4);
    ASSERT_EQ(report.rows.size(), ns.size());
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& a = report.rows[i - 1];
        const auto& b = report.rows[i];
        EXPECT_LE(b.frequency, a.frequency + 2.0 * std::hypot(a.standard_error, b.standard_error));
    }
    EXPECT_GT(report.rows.front().frequency, report.rows.back().frequency);
}

TEST(LowerBound, BetaBarAndProfile) {
    EXPECT_NEAR(beta_bar(0.6, 0.8), 0.03496503496503496, 1e-15);
    const PerturbationProfile v = make_perturbation_profile(0.6, 0.8);
    EXPECT_NEAR(v.target_energy, 0.01748251748251748, 1e-15);
    EXPECT_EQ(v(0.0), 1.0);
    EXPECT_EQ(v(v.width), 0.0);
    EXPECT_EQ(v(-1.0), 0.0);
    const double energy = simpson([&](double u) { return v(u) * v(u); }, -v.width, v.width, 200'000);
    EXPECT_NEAR(energy, v.target_energy, 1e-10);
    const double bump_energy = simpson([](double u) { return bump(u) * bump(u); }, -1.0, 1.0, 200'000);
    EXPECT_NEAR(v.bump_energy, bump_energy, 1e-10);
    EXPECT_THROW((void)make_perturbation_profile(0.8, 0.6), std::invalid_argument);
}

TEST(LowerBound, PerturbationSignalShape) {
    const SignalFunction s = perturbation_signal(0.6, 0.8, 10'000, 0.5);
    const double N_star = adaptive_rate(10'000, 0.6);
    EXPECT_DOUBLE_EQ(s(0.5), 1.0 / N_star);
    EXPECT_EQ(s(0.9), 0.0);
    EXPECT_TRUE(is_stable(s));
    EXPECT_THROW((void)perturbation_signal(0.6, 0.8, 100, 0.001), std::invalid_argument);
}

TEST(LowerBound, SmallRunStatistics) {
    const LowerBoundDiagnostic d = lower_bound_diagnostic(0.6, 0.8, 20'000, 400, 0.5, 8, 2);
    EXPECT_EQ(d.varsigma_sq_samples.size() + d.rejected, 400u);
    EXPECT_DOUBLE_EQ(d.sigma_star_sq, beta_bar(0.6, 0.8) / 2.0);
    const SampleSummary varsigma = d.varsigma_summary();
    EXPECT_NEAR(varsigma.mean, d.sigma_star_sq, 0.2 * d.sigma_star_sq);
    const SampleSummary eta = d.eta_summary();
    EXPECT_NEAR(eta.mean, 0.0, 4.0 * eta.standard_error());
    EXPECT_NEAR(eta.variance, 1.0, 0.3);
}

}  // namespace
}  // namespace seqlep
