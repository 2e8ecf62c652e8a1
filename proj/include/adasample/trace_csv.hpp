#pragma once

#include <string>
#include <vector>

#include "adasample/optimizer.hpp"
#include "adasample/oracle.hpp"

namespace adasample {

// Shortest-exact decimal rendering of a double (17 significant digits);
// canonical "nan" / "inf" / "-inf" spellings.
std::string format_g17(double v);

// Fixed-step sweep summary row.
struct SweepRow {
  double alpha = 0.0;
  double final_f_error = 0.0;
  double eff_evals = 0.0;
};

// Header: k,sample_size,alpha,L,eff_evals,f_error,grad_inf,angle_deg,beta,
// ip_lhs,ip_rhs,orth_lhs,orth_rhs,branch
void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace);

// Header: alpha,final_f_error,eff_evals
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

// Header: k,sample_size,beta,s_min_inner,s_min_norm,angle_deg,ip_lhs,ip_rhs,
// ip_pass,orth_lhs,orth_rhs,orth_pass,norm_lhs,norm_rhs,norm_pass,rho,tan_bound
void write_oracle_csv(const std::string& path, const std::vector<OracleReport>& rows);

}  // namespace adasample
