#pragma once

#include "seqlep/lepski_adaptive.hpp"
#include "seqlep/risk_lab.hpp"
#include "seqlep/sequential_kernel.hpp"

#include <ostream>
#include <span>
#include <string>

namespace seqlep {

/// Shortest-safe text for a real: '.' decimal, 17 significant digits.
[[nodiscard]] std::string format_real(double value);

// Risk: scenario_id,n,M,beta,z0,lambda,R_n,stderr,rate_N,normalized,khat_mode
void write_risk_header(std::ostream& out);
void write_risk_rows(std::ostream& out, const RiskReport& report);

// Selection histogram: scenario_id,n,k,count
void write_khat_header(std::ostream& out);
void write_khat_rows(std::ostream& out, const RiskReport& report);

// z,bound,empirical,margin,pass
void write_tail_csv(std::ostream& out, const TailCheckReport& report);

// k,order,bound,empirical,pass
void write_moments_csv(std::ostream& out, const MomentReport& report);

// n,h,H,M,untriggered,frequency,stderr
void write_stopping_csv(std::ostream& out, const StoppingReport& report);

// n,M,beta_bar_half,mean_varsigma,eta_mean,eta_var
void write_lowerbound_csv(std::ostream& out, const LowerBoundDiagnostic& diag);

// k,beta_k,h_k,N_k,lambda,threshold_k
void write_grid_csv(std::ostream& out, const BandwidthGrid& grid);

/**
 * Per-bandwidth trace: j,beta_j,h_j,N_j,H_j,estimate_j,omega_j,threshold_j,
 * then a trailer table k_hat,value,lambda with a single row.
 */
void write_trace_csv(std::ostream& out, const BandwidthGrid& grid, const AdaptiveEstimate& estimate);

// j,tau,alpha,triggered,A_n,value,bias_term,noise_term (empty cells when untriggered)
void write_sequential_header(std::ostream& out);
void write_sequential_row(std::ostream& out, std::size_t j, const ErrorDecomposition& decomposition);

// k,x_k,y_k
void write_path_csv(std::ostream& out, const Path& path);

}  // namespace seqlep
