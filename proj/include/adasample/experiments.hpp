#pragma once

#include <string>
#include <vector>

#include "adasample/optimizer.hpp"
#include "adasample/oracle.hpp"
#include "adasample/trace_csv.hpp"

namespace adasample {

// Resolved command-line / config-file options, defaults as documented in the
// CLI help. gamma < 0 means "derive from r and omega".
struct ExperimentOptions {
  std::string dataset_path;  // --dataset: LIBSVM file
  std::string synthetic;     // --synthetic: "N,d[,flip[,seed]]"
  std::string test = "ip";   // ip | norm
  double theta = 0.9;
  double nu = 5.84;
  int r = 10;
  double omega = 10.0;
  double gamma = -1.0;
  Index s0 = 2;
  double alpha = 0.0;
  bool alpha_set = false;
  bool line_search = false;
  double l0 = 1.0;
  double eta = 1.5;
  double max_epochs = 100.0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out = "out";   // output directory
  bool plots = false;
  double rstar_tol = 1e-8;
  int trace_diagnostics_every = 1;
  std::string config_path;
};

// Options resolved into concrete run inputs; r_star comes from
// reference_optimum at rstar_tol. Throws ConfigError on contradictions
// (no dataset source, both alpha and line search, ...).
struct ExperimentSetup {
  Dataset data;
  ObjectiveSpec spec;
  RunConfig config;
};

ExperimentSetup prepare_experiment(const ExperimentOptions& opt);

// Fixed-step sweep over alpha = 2^-10 .. 2^15 (26 points, same seed each).
// Diverged points record final_f_error = inf. best_alpha minimizes final
// f_error, ties broken toward the larger alpha.
struct SweepResult {
  std::vector<SweepRow> rows;
  double best_alpha = 0.0;
  std::vector<TraceRecord> best_trace;
};

SweepResult sweep_alphas(const ObjectiveSpec& spec, const Dataset& data,
                         const RunConfig& base);

// The augmented and norm controllers on the same problem with matched seeds.
struct CompareResult {
  RunResult ip;
  RunResult norm;
};

CompareResult compare_tests(const ObjectiveSpec& spec, const Dataset& data,
                            const RunConfig& base);

// Re-runs the configured experiment and evaluates the population oracle at
// every iterate it visits.
std::vector<OracleReport> oracle_rows(const ObjectiveSpec& spec, const Dataset& data,
                                      const RunConfig& base, double theta, double nu);

int cmd_run(const ExperimentOptions& opt);
int cmd_sweep(const ExperimentOptions& opt);
int cmd_compare(const ExperimentOptions& opt);
int cmd_oracle(const ExperimentOptions& opt);

// Parses argv (subcommands run / sweep / compare / oracle), merges the
// optional config file (flag values win), dispatches, and maps errors to
// exit codes: 0 success, 1 usage, 2 run failure, 3 I/O failure.
int run_main(int argc, const char* const* argv);

}  // namespace adasample
