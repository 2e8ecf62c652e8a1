#include "adasample/trace_csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "adasample/errors.hpp"

namespace adasample {

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out.good()) throw IoError("failed writing " + path);
}

}  // namespace

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  auto out = open_out(path);
  out << "k,sample_size,alpha,L,eff_evals,f_error,grad_inf,angle_deg,beta,"
         "ip_lhs,ip_rhs,orth_lhs,orth_rhs,branch\n";
  for (const TraceRecord& r : trace) {
    out << r.k << ',' << r.sample_size << ',' << format_g17(r.alpha) << ','
        << format_g17(r.l) << ',' << format_g17(r.eff_evals) << ','
        << format_g17(r.f_error) << ',' << format_g17(r.grad_inf) << ','
        << format_g17(r.angle_deg) << ',' << format_g17(r.beta) << ','
        << format_g17(r.ip_lhs) << ',' << format_g17(r.ip_rhs) << ','
        << format_g17(r.orth_lhs) << ',' << format_g17(r.orth_rhs) << ','
        << branch_name(r.branch) << '\n';
  }
  finish(out, path);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "alpha,final_f_error,eff_evals\n";
  for (const SweepRow& r : rows) {
    out << format_g17(r.alpha) << ',' << format_g17(r.final_f_error) << ','
        << format_g17(r.eff_evals) << '\n';
  }
  finish(out, path);
}

void write_oracle_csv(const std::string& path, const std::vector<OracleReport>& rows) {
  auto out = open_out(path);
  out << "k,sample_size,beta,s_min_inner,s_min_norm,angle_deg,ip_lhs,ip_rhs,ip_pass,"
         "orth_lhs,orth_rhs,orth_pass,norm_lhs,norm_rhs,norm_pass,rho,tan_bound\n";
  for (const OracleReport& r : rows) {
    out << r.k << ',' << r.sample_size << ',' << format_g17(r.beta.beta) << ','
        << format_g17(r.beta.s_min_inner) << ',' << format_g17(r.beta.s_min_norm)
        << ',' << format_g17(r.angle_deg) << ',' << format_g17(r.tests.ip_lhs) << ','
        << format_g17(r.tests.ip_rhs) << ',' << (r.tests.ip_pass ? 1 : 0) << ','
        << format_g17(r.tests.orth_lhs) << ',' << format_g17(r.tests.orth_rhs) << ','
        << (r.tests.orth_pass ? 1 : 0) << ',' << format_g17(r.tests.norm_lhs) << ','
        << format_g17(r.tests.norm_rhs) << ',' << (r.tests.norm_pass ? 1 : 0) << ','
        << format_g17(r.rho) << ',' << format_g17(r.tan_bound) << '\n';
  }
  finish(out, path);
}

}  // namespace adasample
