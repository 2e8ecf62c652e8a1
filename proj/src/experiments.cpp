#include "adasample/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "adasample/errors.hpp"
#include "adasample/libsvm.hpp"
#include "adasample/svg_plot.hpp"
#include "adasample/synthetic.hpp"

namespace fs = std::filesystem;

namespace adasample {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  double v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError("not a number: '" + s + "'");
  return v;
}

template <class T>
T parse_integer(const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  std::string t = trim(s);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

Dataset resolve_dataset(const ExperimentOptions& opt) {
  const bool has_file = !opt.dataset_path.empty();
  const bool has_syn = !opt.synthetic.empty();
  if (has_file == has_syn)
    throw ConfigError("exactly one of --dataset and --synthetic is required");
  if (has_file) return parse_libsvm(opt.dataset_path);

  const std::vector<std::string> parts = split(opt.synthetic, ',');
  if (parts.size() < 2 || parts.size() > 4)
    throw ConfigError("synthetic spec must be N,d[,flip[,seed]]");
  const Index n = parse_integer<Index>(trim(parts[0]));
  const Index d = parse_integer<Index>(trim(parts[1]));
  const double flip = parts.size() >= 3 ? parse_double(trim(parts[2])) : 0.1;
  const std::uint64_t seed =
      parts.size() == 4 ? parse_integer<std::uint64_t>(trim(parts[3])) : 1;
  return gen_synthetic(n, d, flip, seed);
}

fs::path out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return fs::path(out);
}

template <class F>
std::vector<double> column(const std::vector<TraceRecord>& trace, F f) {
  std::vector<double> v;
  v.reserve(trace.size());
  for (const TraceRecord& r : trace) v.push_back(f(r));
  return v;
}

std::vector<double> iterations_axis(const std::vector<TraceRecord>& trace) {
  return column(trace, [](const TraceRecord& r) { return static_cast<double>(r.k); });
}

}  // namespace

ExperimentSetup prepare_experiment(const ExperimentOptions& opt) {
  Dataset data = resolve_dataset(opt);
  ObjectiveSpec spec =
      ObjectiveSpec::logistic(1.0 / static_cast<double>(data.n_samples()));

  RunConfig cfg;
  cfg.control.theta = opt.theta;
  cfg.control.nu = opt.nu;
  cfg.control.r = opt.r;
  cfg.control.omega = opt.omega;
  cfg.control.gamma = opt.gamma < 0.0 ? gamma_from(opt.r, opt.omega) : opt.gamma;
  cfg.control.s0 = opt.s0;
  if (opt.test == "ip") {
    cfg.control.test_kind = SampleTest::augmented_inner_product;
  } else if (opt.test == "norm") {
    cfg.control.test_kind = SampleTest::norm;
  } else {
    throw ConfigError("unknown test '" + opt.test + "' (expected ip or norm)");
  }

  if (opt.alpha_set && opt.line_search)
    throw ConfigError("--alpha and --line-search are mutually exclusive");
  if (opt.alpha_set) {
    cfg.fixed_alpha = opt.alpha;
  } else {
    LineSearchConfig ls;
    ls.l0 = opt.l0;
    ls.eta = opt.eta;
    cfg.line_search = ls;
  }
  cfg.max_epochs = opt.max_epochs;
  cfg.tol_grad_inf = opt.tol;
  cfg.seed = opt.seed;
  cfg.diagnostics_every = opt.trace_diagnostics_every;
  if (!(opt.rstar_tol > 0.0)) throw ConfigError("rstar tolerance must be positive");

  cfg.control.validate(data.n_samples());
  cfg.r_star = reference_optimum(spec, data, opt.rstar_tol).r_star;
  return ExperimentSetup{std::move(data), std::move(spec), std::move(cfg)};
}

SweepResult sweep_alphas(const ObjectiveSpec& spec, const Dataset& data,
                         const RunConfig& base) {
  SweepResult out;
  double best_err = kInf;
  for (int p = -10; p <= 15; ++p) {
    RunConfig cfg = base;
    cfg.line_search.reset();
    cfg.fixed_alpha = std::ldexp(1.0, p);

    SweepRow row;
    row.alpha = *cfg.fixed_alpha;
    try {
      RunResult res = run(spec, data, cfg);
      row.final_f_error = full_value(spec, data, res.x) - base.r_star;
      row.eff_evals = res.eff_evals;
      // ascending alphas with <=: ties go to the larger step
      if (std::isfinite(row.final_f_error) && row.final_f_error <= best_err) {
        best_err = row.final_f_error;
        out.best_alpha = row.alpha;
        out.best_trace = std::move(res.trace);
      }
    } catch (const DivergenceError&) {
      row.final_f_error = kInf;
      row.eff_evals = kNaN;
    }
    out.rows.push_back(row);
  }
  return out;
}

CompareResult compare_tests(const ObjectiveSpec& spec, const Dataset& data,
                            const RunConfig& base) {
  RunConfig ip = base;
  ip.control.test_kind = SampleTest::augmented_inner_product;
  RunConfig norm = base;
  norm.control.test_kind = SampleTest::norm;
  return CompareResult{run(spec, data, ip), run(spec, data, norm)};
}

std::vector<OracleReport> oracle_rows(const ObjectiveSpec& spec, const Dataset& data,
                                      const RunConfig& base, double theta, double nu) {
  std::vector<OracleReport> rows;
  RunConfig cfg = base;
  cfg.observer = [&](const TraceRecord& rec, const GradientBundle& bundle,
                     const Vector& x) {
    OracleReport row;
    row.k = rec.k;
    row.sample_size = rec.sample_size;
    row.beta = beta_and_min_sizes(spec, data, x, theta);
    const Vector g = full_gradient(spec, data, x);
    row.angle_deg = (g.norm() > 0.0 && bundle.batch_mean.norm() > 0.0)
                        ? angle_degrees(bundle.batch_mean, g)
                        : kNaN;
    row.tests = exact_tests(spec, data, x, theta, nu, rec.sample_size);
    row.rho = spec.kind == ObjectiveKind::mean_square_centers
                  ? theoretical_rate(theta, nu, 1.0, 1.0)
                  : kNaN;
    row.tan_bound = theta < 1.0 ? tan_bound(theta, nu) : kNaN;
    rows.push_back(std::move(row));
  };
  run(spec, data, cfg);
  return rows;
}

int cmd_run(const ExperimentOptions& opt) {
  ExperimentSetup s = prepare_experiment(opt);
  const RunResult res = run(s.spec, s.data, s.config);
  const fs::path dir = out_dir(opt.out);
  write_trace_csv((dir / "trace.csv").string(), res.trace);

  if (opt.plots) {
    const std::vector<double> ks = iterations_axis(res.trace);
    write_svg_plot((dir / "f_error.svg").string(), "objective gap",
                   "effective evaluations", "R(x_k) - R*",
                   {{"f_error", column(res.trace, [](const auto& r) { return r.eff_evals; }),
                     column(res.trace, [](const auto& r) { return r.f_error; })}},
                   true);
    write_svg_plot((dir / "batch_size.svg").string(), "sample size", "iteration k",
                   "|S_k|",
                   {{"sample_size", ks,
                     column(res.trace,
                            [](const auto& r) { return static_cast<double>(r.sample_size); })}},
                   false);
    write_svg_plot((dir / "steplength.svg").string(), "step length", "iteration k",
                   "alpha_k",
                   {{"alpha", ks, column(res.trace, [](const auto& r) { return r.alpha; })}},
                   true);
    write_svg_plot((dir / "angle.svg").string(), "angle to the full gradient",
                   "iteration k", "degrees",
                   {{"angle", ks, column(res.trace, [](const auto& r) { return r.angle_deg; })}},
                   false);
  }

  const double final_f = full_value(s.spec, s.data, res.x) - s.config.r_star;
  const double final_g = full_gradient(s.spec, s.data, res.x).lpNorm<Eigen::Infinity>();
  std::cout << "stop=" << stop_reason_name(res.reason) << " iterations="
            << res.trace.size() << " eff_evals=" << format_g17(res.eff_evals)
            << " f_error=" << format_g17(final_f) << " grad_inf=" << format_g17(final_g)
            << '\n';
  return 0;
}

int cmd_sweep(const ExperimentOptions& opt) {
  if (opt.alpha_set) throw ConfigError("sweep chooses the step length; drop --alpha");
  if (opt.line_search) throw ConfigError("sweep uses fixed steps; drop --line-search");
  ExperimentSetup s = prepare_experiment(opt);
  const SweepResult sw = sweep_alphas(s.spec, s.data, s.config);

  const fs::path dir = out_dir(opt.out);
  write_sweep_csv((dir / "sweep.csv").string(), sw.rows);
  write_trace_csv((dir / "best_trace.csv").string(), sw.best_trace);

  if (opt.plots) {
    std::vector<double> lg, err;
    for (const SweepRow& r : sw.rows) {
      lg.push_back(std::log2(r.alpha));
      err.push_back(r.final_f_error);
    }
    write_svg_plot((dir / "sweep.svg").string(), "fixed-step sweep", "log2(alpha)",
                   "final R(x) - R*", {{"final_f_error", lg, err}}, true);
  }

  std::cout << "best_alpha=" << format_g17(sw.best_alpha) << '\n';
  return 0;
}

int cmd_compare(const ExperimentOptions& opt) {
  ExperimentSetup s = prepare_experiment(opt);
  const CompareResult cr = compare_tests(s.spec, s.data, s.config);

  const fs::path dir = out_dir(opt.out);
  write_trace_csv((dir / "trace_ip.csv").string(), cr.ip.trace);
  write_trace_csv((dir / "trace_norm.csv").string(), cr.norm.trace);

  if (opt.plots) {
    write_svg_plot((dir / "compare_f_error.svg").string(), "objective gap",
                   "effective evaluations", "R(x_k) - R*",
                   {{"ip", column(cr.ip.trace, [](const auto& r) { return r.eff_evals; }),
                     column(cr.ip.trace, [](const auto& r) { return r.f_error; })},
                    {"norm", column(cr.norm.trace, [](const auto& r) { return r.eff_evals; }),
                     column(cr.norm.trace, [](const auto& r) { return r.f_error; })}},
                   true);
    write_svg_plot((dir / "compare_batch_size.svg").string(), "sample size",
                   "iteration k", "|S_k|",
                   {{"ip", iterations_axis(cr.ip.trace),
                     column(cr.ip.trace,
                            [](const auto& r) { return static_cast<double>(r.sample_size); })},
                    {"norm", iterations_axis(cr.norm.trace),
                     column(cr.norm.trace,
                            [](const auto& r) { return static_cast<double>(r.sample_size); })}},
                   false);
  }

  std::cout << "ip stop=" << stop_reason_name(cr.ip.reason) << " iterations="
            << cr.ip.trace.size() << " eff_evals=" << format_g17(cr.ip.eff_evals) << '\n'
            << "norm stop=" << stop_reason_name(cr.norm.reason) << " iterations="
            << cr.norm.trace.size() << " eff_evals=" << format_g17(cr.norm.eff_evals)
            << '\n';
  return 0;
}

int cmd_oracle(const ExperimentOptions& opt) {
  ExperimentSetup s = prepare_experiment(opt);
  const std::vector<OracleReport> rows =
      oracle_rows(s.spec, s.data, s.config, opt.theta, opt.nu);

  const fs::path dir = out_dir(opt.out);
  write_oracle_csv((dir / "oracle.csv").string(), rows);

  if (opt.plots) {
    std::vector<double> ks, beta, s_ip, s_norm;
    for (const OracleReport& r : rows) {
      ks.push_back(static_cast<double>(r.k));
      beta.push_back(r.beta.beta);
      s_ip.push_back(r.beta.s_min_inner);
      s_norm.push_back(r.beta.s_min_norm);
    }
    write_svg_plot((dir / "oracle_beta.svg").string(), "test-ratio beta",
                   "iteration k", "beta", {{"beta", ks, beta}}, false);
    write_svg_plot((dir / "oracle_min_sizes.svg").string(), "minimal exact sizes",
                   "iteration k", "samples",
                   {{"s_min_inner", ks, s_ip}, {"s_min_norm", ks, s_norm}}, true);
  }

  std::cout << "rows=" << rows.size() << '\n';
  return 0;
}

namespace {

// Config files hold key=value lines; keys are the long option names without
// the dashes. Values on the command line win.
struct KeyApplier {
  const char* key;
  void (*apply)(ExperimentOptions&, const std::string&);
};

const KeyApplier kAppliers[] = {
    {"dataset", [](ExperimentOptions& o, const std::string& v) { o.dataset_path = v; }},
    {"synthetic", [](ExperimentOptions& o, const std::string& v) { o.synthetic = v; }},
    {"test", [](ExperimentOptions& o, const std::string& v) { o.test = v; }},
    {"theta", [](ExperimentOptions& o, const std::string& v) { o.theta = parse_double(v); }},
    {"nu", [](ExperimentOptions& o, const std::string& v) { o.nu = parse_double(v); }},
    {"r", [](ExperimentOptions& o, const std::string& v) { o.r = parse_integer<int>(v); }},
    {"omega", [](ExperimentOptions& o, const std::string& v) { o.omega = parse_double(v); }},
    {"gamma", [](ExperimentOptions& o, const std::string& v) { o.gamma = parse_double(v); }},
    {"s0", [](ExperimentOptions& o, const std::string& v) { o.s0 = parse_integer<Index>(v); }},
    {"alpha",
     [](ExperimentOptions& o, const std::string& v) {
       o.alpha = parse_double(v);
       o.alpha_set = true;
     }},
    {"line-search",
     [](ExperimentOptions& o, const std::string& v) { o.line_search = parse_bool(v); }},
    {"l0", [](ExperimentOptions& o, const std::string& v) { o.l0 = parse_double(v); }},
    {"eta", [](ExperimentOptions& o, const std::string& v) { o.eta = parse_double(v); }},
    {"max-epochs",
     [](ExperimentOptions& o, const std::string& v) { o.max_epochs = parse_double(v); }},
    {"tol", [](ExperimentOptions& o, const std::string& v) { o.tol = parse_double(v); }},
    {"seed",
     [](ExperimentOptions& o, const std::string& v) {
       o.seed = parse_integer<std::uint64_t>(v);
     }},
    {"out", [](ExperimentOptions& o, const std::string& v) { o.out = v; }},
    {"plots", [](ExperimentOptions& o, const std::string& v) { o.plots = parse_bool(v); }},
    {"rstar-tol",
     [](ExperimentOptions& o, const std::string& v) { o.rstar_tol = parse_double(v); }},
    {"trace-diagnostics-every",
     [](ExperimentOptions& o, const std::string& v) {
       o.trace_diagnostics_every = parse_integer<int>(v);
     }},
};

void apply_config_file(ExperimentOptions& opt, const CLI::App& sub) {
  std::ifstream in(opt.config_path);
  if (!in) throw IoError("cannot open config file " + opt.config_path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    const KeyApplier* found = nullptr;
    for (const KeyApplier& a : kAppliers)
      if (key == a.key) { found = &a; break; }
    if (found == nullptr)
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    if (sub.count("--" + key) > 0) continue;
    try {
      found->apply(opt, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ", key '" + key +
                        "': " + e.what());
    }
  }
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  ExperimentOptions opt;
  CLI::App app{"adaptive-sampling stochastic optimization benchmark"};
  app.require_subcommand(1);

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--dataset", opt.dataset_path, "LIBSVM training data file");
    sub->add_option("--synthetic", opt.synthetic,
                    "synthetic data as N,d[,flip[,seed]] (defaults flip=0.1, seed=1)");
    sub->add_option("--test", opt.test, "sampling test: ip | norm")->capture_default_str();
    sub->add_option("--theta", opt.theta, "variance test constant")->capture_default_str();
    sub->add_option("--nu", opt.nu, "orthogonality test constant")->capture_default_str();
    sub->add_option("--r", opt.r, "running-average window")->capture_default_str();
    sub->add_option("--omega", opt.omega, "safeguard noise target")->capture_default_str();
    sub->add_option("--gamma", opt.gamma,
                    "safeguard threshold; negative derives it from r and omega");
    sub->add_option("--s0", opt.s0, "initial sample size")->capture_default_str();
    sub->add_option("--alpha", opt.alpha, "fixed step length (default: line search)");
    sub->add_flag("--line-search", opt.line_search,
                  "variance-aware backtracking line search");
    sub->add_option("--l0", opt.l0, "initial Lipschitz estimate")->capture_default_str();
    sub->add_option("--eta", opt.eta, "backtracking growth factor")->capture_default_str();
    sub->add_option("--max-epochs", opt.max_epochs,
                    "budget in effective passes over the data")
        ->capture_default_str();
    sub->add_option("--tol", opt.tol, "stop when ||grad R||_inf <= tol")
        ->capture_default_str();
    sub->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_flag("--plots", opt.plots, "also write SVG plots");
    sub->add_option("--rstar-tol", opt.rstar_tol,
                    "gradient tolerance for the reference optimum")
        ->capture_default_str();
    sub->add_option("--trace-diagnostics-every", opt.trace_diagnostics_every,
                    "cadence of the angle / beta trace columns")
        ->capture_default_str();
    sub->add_option("--config", opt.config_path,
                    "key=value defaults file; command-line flags win");
    return sub;
  };

  CLI::App* c_run =
      add_common(app.add_subcommand("run", "one adaptive run; writes trace.csv"));
  CLI::App* c_sweep = add_common(
      app.add_subcommand("sweep", "fixed-step sweep over alpha = 2^-10 .. 2^15"));
  CLI::App* c_compare = add_common(
      app.add_subcommand("compare", "augmented vs norm test with matched seeds"));
  CLI::App* c_oracle = add_common(
      app.add_subcommand("oracle", "population diagnostics along a run"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = nullptr;
  for (CLI::App* s : {c_run, c_sweep, c_compare, c_oracle})
    if (s->parsed()) sub = s;

  try {
    if (sub == nullptr) throw ConfigError("one subcommand is required");
    opt.alpha_set = sub->count("--alpha") > 0;
    if (!opt.config_path.empty()) apply_config_file(opt, *sub);
    if (sub == c_run) return cmd_run(opt);
    if (sub == c_sweep) return cmd_sweep(opt);
    if (sub == c_compare) return cmd_compare(opt);
    return cmd_oracle(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return 2;
  } catch (const LineSearchError& e) {
    std::cerr << "line search failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace adasample
