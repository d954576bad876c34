#include "seqlep/report_io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace seqlep {

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

namespace {

const char* flag(bool value) { return value ? "1" : "0"; }

}  // namespace

void write_risk_header(std::ostream& out) {
    out << "scenario_id,n,M,beta,z0,lambda,R_n,stderr,rate_N,normalized,khat_mode\n";
}

void write_risk_rows(std::ostream& out, const RiskReport& report) {
    for (const auto& row : report.rows) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{}\n", report.scenario_id, row.n, row.M,
                   format_real(report.beta), format_real(report.z0), format_real(row.lambda),
                   format_real(row.R_n), format_real(row.standard_error), format_real(row.rate_N),
                   format_real(row.normalized), row.khat_mode());
    }
}

void write_khat_header(std::ostream& out) { out << "scenario_id,n,k,count\n"; }

void write_khat_rows(std::ostream& out, const RiskReport& report) {
    for (const auto& row : report.rows) {
        for (std::size_t k = 0; k < row.khat_histogram.size(); ++k) {
            fmt::print(out, "{},{},{},{}\n", report.scenario_id, row.n, k, row.khat_histogram[k]);
        }
    }
}

void write_tail_csv(std::ostream& out, const TailCheckReport& report) {
    out << "z,bound,empirical,margin,pass\n";
    for (const auto& row : report.rows) {
        fmt::print(out, "{},{},{},{},{}\n", format_real(row.z), format_real(row.bound),
                   format_real(row.empirical), format_real(row.margin), flag(row.pass));
    }
}

void write_moments_csv(std::ostream& out, const MomentReport& report) {
    out << "k,order,bound,empirical,pass\n";
    for (const auto& row : report.rows) {
        fmt::print(out, "{},{},{},{},{}\n", row.k, row.order, format_real(row.bound),
                   format_real(row.empirical), flag(row.pass));
    }
}

void write_stopping_csv(std::ostream& out, const StoppingReport& report) {
    out << "n,h,H,M,untriggered,frequency,stderr\n";
    for (const auto& row : report.rows) {
        fmt::print(out, "{},{},{},{},{},{},{}\n", row.n, format_real(row.h), format_real(row.H), row.M,
                   row.untriggered, format_real(row.frequency), format_real(row.standard_error));
    }
}

void write_lowerbound_csv(std::ostream& out, const LowerBoundDiagnostic& diag) {
    out << "n,M,beta_bar_half,mean_varsigma,eta_mean,eta_var\n";
    const SampleSummary varsigma = diag.varsigma_summary();
    const SampleSummary eta = diag.eta_summary();
    fmt::print(out, "{},{},{},{},{},{}\n", diag.n, diag.M, format_real(diag.sigma_star_sq),
               format_real(varsigma.mean), format_real(eta.mean), format_real(eta.variance));
}

void write_grid_csv(std::ostream& out, const BandwidthGrid& grid) {
    out << "k,beta_k,h_k,N_k,lambda,threshold_k\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        fmt::print(out, "{},{},{},{},{},{}\n", k, format_real(grid.beta_points[k]), format_real(grid.h_points[k]),
                   format_real(grid.N_points[k]), format_real(grid.lambda), format_real(grid.threshold(k)));
    }
}

void write_trace_csv(std::ostream& out, const BandwidthGrid& grid, const AdaptiveEstimate& estimate) {
    out << "j,beta_j,h_j,N_j,H_j,estimate_j,omega_j,threshold_j\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
        fmt::print(out, "{},{},{},{},{},{},{},{}\n", j, format_real(grid.beta_points[j]),
                   format_real(grid.h_points[j]), format_real(grid.N_points[j]),
                   format_real(estimate.grid_estimates[j].H), format_real(estimate.grid_estimates[j].value),
                   format_real(estimate.omega_values[j]), format_real(grid.threshold(j)));
    }
    out << "k_hat,value,lambda\n";
    fmt::print(out, "{},{},{}\n", estimate.k_hat, format_real(estimate.value), format_real(grid.lambda));
}

void write_sequential_header(std::ostream& out) {
    out << "j,tau,alpha,triggered,A_n,value,bias_term,noise_term\n";
}

void write_sequential_row(std::ostream& out, std::size_t j, const ErrorDecomposition& d) {
    const auto& est = d.estimate;
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", j, est.tau ? fmt::format("{}", *est.tau) : std::string(),
               est.alpha ? format_real(*est.alpha) : std::string(), flag(est.triggered), format_real(est.A_n),
               format_real(est.value), format_real(d.bias_term), format_real(d.noise_term));
}

void write_path_csv(std::ostream& out, const Path& path) {
    out << "k,x_k,y_k\n";
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        fmt::print(out, "{},{},{}\n", k, format_real(path.design_point(k)), format_real(path.values[k]));
    }
}

}  // namespace seqlep
