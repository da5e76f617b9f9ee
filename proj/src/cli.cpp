#include "ccs/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>

#include "ccs/evaluation.hpp"
#include "ccs/inference.hpp"
#include "ccs/io.hpp"
#include "ccs/kernels.hpp"
#include "ccs/local_moments.hpp"
#include "ccs/rng.hpp"
#include "ccs/solvers.hpp"
#include "ccs/synthetic.hpp"
#include "ccs/version.hpp"

namespace ccs {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

// Effective configuration of a run: sorted key=value map, hashed into every
// output header and echoed into report.json.
using ConfigMap = std::map<std::string, std::string>;

std::string serialize_config(const ConfigMap& config) {
  std::string out;
  for (const auto& [k, v] : config) out += k + "=" + v + "\n";
  return out;
}

OutputHeader make_header(std::uint64_t seed, const ConfigMap& config) {
  return OutputHeader{seed, hex64(fnv1a(serialize_config(config)))};
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

Json config_json(const ConfigMap& config) {
  Json j = Json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

std::string trim_ws(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Flat key=value lines; '#' comments and blank lines skipped. Keys name long
// options of the active subcommand without the leading dashes.
std::vector<std::pair<std::string, std::string>> load_config_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim_ws(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key = trim_ws(t.substr(0, eq));
    std::string value = trim_ws(t.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    if (key == "config")
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": config files cannot reference other config files");
    pairs.emplace_back(key, value);
  }
  return pairs;
}

bool option_given(const std::vector<std::string>& tokens, const std::string& key) {
  std::string name = "--" + key;
  for (const std::string& t : tokens)
    if (t == name || t.rfind(name + "=", 0) == 0) return true;
  return false;
}

// Pulls --config FILE out of the raw arguments and splices the file's pairs
// in as --key=value tokens, skipping keys already set on the command line so
// explicit flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::vector<std::string> tokens;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ValidationError("--config requires a file path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      tokens.push_back(args[i]);
    }
  }
  if (!config_path.empty())
    for (const auto& [key, value] : load_config_pairs(config_path))
      if (!option_given(tokens, key)) tokens.push_back("--" + key + "=" + value);
  return tokens;
}

// Default simulation penalty lambda = n^(-3/8) sqrt(log p).
double default_lambda(int n, int p) {
  return std::pow(static_cast<double>(n), -0.375) * std::sqrt(std::log(static_cast<double>(p)));
}

struct CommonFlags {
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string config_file;  // consumed before parsing; bound here so help lists it
};

void add_common(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--out-dir", c.out_dir, "output directory");
  cmd->add_option("--config", c.config_file, "flat key=value config file; flags override")
      ->type_name("FILE");
}

struct DataFlags {
  std::string data;
  std::string z_column = "z";
  bool log_returns = false;
  bool standardize = false;
};

void add_data(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--data", d.data, "input CSV with a header row")->required();
  cmd->add_option("--z-column", d.z_column, "name of the index column");
  cmd->add_flag("--log-returns", d.log_returns, "log-return transform per feature column");
  cmd->add_flag("--standardize", d.standardize, "per-column mean 0, variance 1");
}

struct EstimateFlags {
  double lambda = -1.0;  // negative requests the n^(-3/8) sqrt(log p) default
  int grid_size = 51;
  double c_h = 1.0;
  std::string kernel = "epanechnikov";
  std::string centering = "per_observation";
  std::string solver = "prisma";
  std::string schedule = "constant";
  double L_f = 0.1;
  double beta = 0.1;
  int max_iter = 2000;
  double rel_tol = 1e-7;
  double support_tol = 1e-4;
  double rho = 1.0;
  double admm_tol = 1e-6;
  bool no_screen = false;
};

void add_estimate(CLI::App* cmd, EstimateFlags& e, bool with_solver_choice = true) {
  cmd->add_option("--lambda", e.lambda, "penalty weight; default depends on the subcommand");
  cmd->add_option("--grid-size", e.grid_size, "index grid size K")->check(CLI::Range(2, 100000));
  cmd->add_option("--c-h", e.c_h, "bandwidth multiplier");
  cmd->add_option("--kernel", e.kernel, "epanechnikov | boxcar | tricube");
  cmd->add_option("--centering", e.centering, "per_observation | at_target | none");
  if (with_solver_choice) cmd->add_option("--solver", e.solver, "prisma | admm");
  cmd->add_option("--beta-schedule", e.schedule, "constant | inverse_k");
  cmd->add_option("--L-f", e.L_f, "smooth part Lipschitz constant");
  cmd->add_option("--beta", e.beta, "Moreau smoothing parameter");
  cmd->add_option("--max-iter", e.max_iter, "iteration cap");
  cmd->add_option("--rel-tol", e.rel_tol, "relative objective-change tolerance");
  cmd->add_option("--support-tol", e.support_tol, "group-norm support threshold");
  cmd->add_option("--rho", e.rho, "ADMM penalty parameter");
  cmd->add_option("--admm-tol", e.admm_tol, "ADMM residual tolerance");
  cmd->add_flag("--no-screen", e.no_screen, "disable covariance screening");
}

SolverConfig solver_config(const EstimateFlags& e, double lambda) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.L_f = e.L_f;
  cfg.beta = e.beta;
  cfg.schedule = schedule_from_string(e.schedule);
  cfg.max_iter = e.max_iter;
  cfg.rel_tol = e.rel_tol;
  cfg.support_tol = e.support_tol;
  return cfg;
}

void record_estimate(ConfigMap& m, const EstimateFlags& e, double lambda) {
  m["lambda"] = format_double(lambda);
  m["grid_size"] = std::to_string(e.grid_size);
  m["c_h"] = format_double(e.c_h);
  m["kernel"] = e.kernel;
  m["centering"] = e.centering;
  m["solver"] = e.solver;
  m["beta_schedule"] = e.schedule;
  m["L_f"] = format_double(e.L_f);
  m["beta"] = format_double(e.beta);
  m["max_iter"] = std::to_string(e.max_iter);
  m["rel_tol"] = format_double(e.rel_tol);
  m["support_tol"] = format_double(e.support_tol);
  m["rho"] = format_double(e.rho);
  m["admm_tol"] = format_double(e.admm_tol);
  m["screen"] = e.no_screen ? "false" : "true";
}

struct ScenarioFlags {
  std::string graph = "chain";
  int p = 20;
  std::string path = "sin";
  double pd_floor = 0.5;
  std::uint64_t scenario_seed = 0;  // 0 falls back to --seed
  int n = 500;
};

void add_scenario(CLI::App* cmd, ScenarioFlags& s) {
  cmd->add_option("--graph", s.graph, "chain | nearest_neighbor | erdos_renyi | scale_free");
  cmd->add_option("--p", s.p, "node count")->check(CLI::PositiveNumber);
  cmd->add_option("--path", s.path, "random_walk | linear | sin");
  cmd->add_option("--pd-floor", s.pd_floor, "minimum eigenvalue floor");
  cmd->add_option("--scenario-seed", s.scenario_seed, "graph/path seed; defaults to --seed");
  cmd->add_option("--n", s.n, "sample size")->check(CLI::PositiveNumber);
}

ScenarioSpec scenario_from(const ScenarioFlags& s, std::uint64_t fallback_seed) {
  ScenarioSpec spec;
  spec.graph_kind = graph_from_string(s.graph);
  spec.p = s.p;
  spec.path = path_from_string(s.path);
  spec.pd_floor = s.pd_floor;
  spec.seed = s.scenario_seed != 0 ? s.scenario_seed : fallback_seed;
  return spec;
}

void record_scenario(ConfigMap& m, const ScenarioSpec& spec, int n) {
  m["graph"] = to_string(spec.graph_kind);
  m["p"] = std::to_string(spec.p);
  m["path"] = to_string(spec.path);
  m["pd_floor"] = format_double(spec.pd_floor);
  m["scenario_seed"] = std::to_string(spec.seed);
  m["n"] = std::to_string(n);
}

PrecisionField truth_field(const IndexGrid& grid, const MatStack& truth, const EdgeSet& edges) {
  PrecisionField field;
  field.grid = grid;
  field.matrices = truth;
  field.group_norms = quad_mean(truth);
  field.support = edges;
  return field;
}

// simulate: scenario -> data.csv, omega_true.csv, scenario.txt
int cmd_simulate(const CommonFlags& common, const ScenarioFlags& sflags, int grid_size) {
  ScenarioSpec scenario = scenario_from(sflags, common.seed);
  IndexGrid grid = uniform_grid(grid_size);
  auto [sample, truth] = sample_dataset(scenario, sflags.n, grid, common.seed);

  ConfigMap config;
  record_scenario(config, scenario, sflags.n);
  config["command"] = "simulate";
  config["grid_size"] = std::to_string(grid_size);
  config["seed"] = std::to_string(common.seed);
  OutputHeader header = make_header(common.seed, config);

  fs::create_directories(common.out_dir);
  PrecisionPath path(scenario);
  write_dataset_csv(common.out_dir + "/data.csv", header, sample);
  write_omega_grid_csv(common.out_dir + "/omega_true.csv", header,
                       truth_field(grid, truth, path.graph().edges));

  std::ofstream scenario_file(common.out_dir + "/scenario.txt", std::ios::binary);
  scenario_file << "kind=" << to_string(scenario.graph_kind) << "\n"
                << "p=" << scenario.p << "\n"
                << "seed=" << scenario.seed << "\n"
                << "path_kind=" << to_string(scenario.path) << "\n"
                << "pd_floor=" << format_double(scenario.pd_floor) << "\n";
  return kExitOk;
}

struct FitOutput {
  PrecisionField field;
  SolveReport report;
  CovarianceField cov;
  double lambda = 0.0;
};

FitOutput run_fit(const IndexedSample& sample, const EstimateFlags& e, bool inference_bandwidth) {
  double h = default_bandwidth(sample.n(), e.c_h, inference_bandwidth);
  IndexGrid grid = uniform_grid(e.grid_size);
  CovarianceField cov = local_covariance_field(sample, grid, h, kernel_from_string(e.kernel),
                                               centering_from_string(e.centering));
  double lambda = e.lambda >= 0.0 ? e.lambda : default_lambda(sample.n(), sample.p());

  FitOutput out;
  out.cov = cov;
  out.lambda = lambda;
  if (e.solver == "admm") {
    AdmmConfig cfg;
    cfg.lambda = lambda;
    cfg.rho = e.rho;
    cfg.max_iter = e.max_iter;
    cfg.tol = e.admm_tol;
    FitResult r = fit_admm(cov, cfg);
    out.field = std::move(r.field);
    out.report = std::move(r.report);
  } else if (e.solver == "prisma") {
    SolverConfig cfg = solver_config(e, lambda);
    FitResult r = (e.no_screen || lambda == 0.0) ? fit_prisma(cov, cfg)
                                                 : fit_prisma_screened(cov, cfg);
    out.field = std::move(r.field);
    out.report = std::move(r.report);
  } else {
    throw ValidationError("unknown solver: " + e.solver);
  }
  return out;
}

Json fit_report_json(const FitOutput& fit, const ConfigMap& config, const OutputHeader& header) {
  Json j;
  j["tool"] = std::string("ccs ") + kVersion;
  j["config_hash"] = header.config_hash;
  j["config"] = config_json(config);
  j["lambda"] = fit.lambda;
  j["iterations"] = fit.report.iterations;
  j["converged"] = fit.report.converged;
  j["final_objective"] = fit.report.final_objective;
  j["support_size"] = fit.field.support.size();
  return j;
}

int cmd_fit(const CommonFlags& common, const DataFlags& d, const EstimateFlags& e) {
  IngestOptions opts{d.z_column, d.log_returns, d.standardize};
  IndexedSample sample = ingest_csv(d.data, opts);
  FitOutput fit = run_fit(sample, e, false);

  ConfigMap config;
  record_estimate(config, e, fit.lambda);
  config["command"] = "fit";
  config["seed"] = std::to_string(common.seed);
  config["data"] = d.data;
  config["z_column"] = d.z_column;
  config["log_returns"] = d.log_returns ? "true" : "false";
  config["standardize"] = d.standardize ? "true" : "false";
  OutputHeader header = make_header(common.seed, config);

  fs::create_directories(common.out_dir);
  write_omega_grid_csv(common.out_dir + "/omega_grid.csv", header, fit.field);
  write_support_csv(common.out_dir + "/support.csv", header, fit.field);
  write_json(common.out_dir + "/report.json", fit_report_json(fit, config, header));
  return fit.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_ci(const CommonFlags& common, const DataFlags& d, const EstimateFlags& e, double alpha,
           const std::string& rate) {
  IngestOptions opts{d.z_column, d.log_returns, d.standardize};
  IndexedSample sample = ingest_csv(d.data, opts);
  FitOutput fit = run_fit(sample, e, true);  // inference bandwidth n^(-1/4)

  RateMode mode = rate_mode_from_string(rate);
  ConfidenceBand band =
      confidence_band(fit.field, fit.cov, sample, alpha, mode, kernel_from_string(e.kernel),
                      fit.cov.h);

  ConfigMap config;
  record_estimate(config, e, fit.lambda);
  config["command"] = "ci";
  config["seed"] = std::to_string(common.seed);
  config["data"] = d.data;
  config["z_column"] = d.z_column;
  config["log_returns"] = d.log_returns ? "true" : "false";
  config["standardize"] = d.standardize ? "true" : "false";
  config["alpha"] = format_double(alpha);
  config["rate"] = rate;
  OutputHeader header = make_header(common.seed, config);

  fs::create_directories(common.out_dir);
  write_ci_csv(common.out_dir + "/ci.csv", header, band);
  write_json(common.out_dir + "/report.json", fit_report_json(fit, config, header));
  return fit.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_path(const CommonFlags& common, const ScenarioFlags& sflags, const EstimateFlags& e,
             int lambda_count, int replicates) {
  if (e.lambda >= 0.0)
    throw ValidationError("path sweeps a generated lambda grid; use --lambda-count, not --lambda");
  ScenarioSpec scenario = scenario_from(sflags, common.seed);
  FitOptions options;
  options.c_h = e.c_h;
  options.grid_size = e.grid_size;
  options.kernel = kernel_from_string(e.kernel);
  options.centering = centering_from_string(e.centering);
  options.solver = solver_config(e, 0.0);

  std::vector<double> lambdas;
  if (lambda_count != 15) {
    IndexGrid grid = uniform_grid(options.grid_size);
    auto [sample, truth] = sample_dataset(scenario, sflags.n, grid, Rng::derive(common.seed, 0));
    (void)truth;
    CovarianceField cov = local_covariance_field(
        sample, grid, default_bandwidth(sflags.n, e.c_h, false), options.kernel,
        options.centering);
    lambdas = lambda_grid(cov, lambda_count);
  }
  RecoveryExperiment experiment = run_recovery_experiment(scenario, sflags.n, std::move(lambdas),
                                                          replicates, options, common.seed);

  ConfigMap config;
  record_scenario(config, scenario, sflags.n);
  record_estimate(config, e, -1.0);
  config["lambda"] = "auto";
  config["command"] = "path";
  config["seed"] = std::to_string(common.seed);
  config["lambda_count"] = std::to_string(lambda_count);
  config["replicates"] = std::to_string(replicates);
  OutputHeader header = make_header(common.seed, config);

  fs::create_directories(common.out_dir);
  write_pr_curve_csv(common.out_dir + "/pr_curve.csv", header, experiment.rows);

  Json j;
  j["tool"] = std::string("ccs ") + kVersion;
  j["config_hash"] = header.config_hash;
  j["config"] = config_json(config);
  j["best_lambda"] = experiment.best_lambda;
  j["best_f1"] = experiment.best_f1;
  write_json(common.out_dir + "/report.json", j);
  return kExitOk;
}

int cmd_cv(const CommonFlags& common, const DataFlags& d, const EstimateFlags& e, int folds,
           const std::string& mode) {
  IngestOptions opts{d.z_column, d.log_returns, d.standardize};
  IndexedSample sample = ingest_csv(d.data, opts);
  double lambda = e.lambda >= 0.0 ? e.lambda : default_lambda(sample.n(), sample.p());

  FitOptions options;
  options.c_h = e.c_h;
  options.grid_size = e.grid_size;
  options.kernel = kernel_from_string(e.kernel);
  options.centering = centering_from_string(e.centering);
  options.solver = solver_config(e, lambda);

  ConfigMap config;
  record_estimate(config, e, lambda);
  config["command"] = "cv";
  config["seed"] = std::to_string(common.seed);
  config["data"] = d.data;
  config["z_column"] = d.z_column;
  config["log_returns"] = d.log_returns ? "true" : "false";
  config["standardize"] = d.standardize ? "true" : "false";
  config["folds"] = std::to_string(folds);
  config["mode"] = mode;
  OutputHeader header = make_header(common.seed, config);

  Json j;
  j["tool"] = std::string("ccs ") + kVersion;
  j["config_hash"] = header.config_hash;
  j["config"] = config_json(config);

  auto emit = [&](const char* name, CvMode m) {
    CvResult r = cv_loss(sample, folds, lambda, options, m, common.seed);
    Json entry;
    entry["total"] = r.total;
    entry["fold_totals"] = r.fold_totals;
    entry["std_error"] = r.std_error;
    j[name] = entry;
  };
  if (mode == "ccs" || mode == "both") emit("ccs", CvMode::ccs);
  if (mode == "static_glasso" || mode == "both") emit("static_glasso", CvMode::static_glasso);
  if (mode != "ccs" && mode != "static_glasso" && mode != "both")
    throw ValidationError("unknown cv mode: " + mode);

  fs::create_directories(common.out_dir);
  write_json(common.out_dir + "/cv.json", j);
  return kExitOk;
}

int cmd_bench(const CommonFlags& common, const ScenarioFlags& sflags, const EstimateFlags& e) {
  ScenarioSpec scenario = scenario_from(sflags, common.seed);
  IndexGrid grid = uniform_grid(e.grid_size);
  auto [sample, truth] = sample_dataset(scenario, sflags.n, grid, common.seed);
  (void)truth;
  CovarianceField cov = local_covariance_field(
      sample, grid, default_bandwidth(sflags.n, e.c_h, false), kernel_from_string(e.kernel),
      centering_from_string(e.centering));
  double lambda = e.lambda >= 0.0 ? e.lambda : lambda_max(cov) / 4.0;

  SolverConfig pc = solver_config(e, lambda);
  FitResult prisma = fit_prisma(cov, pc);
  AdmmConfig ac;
  ac.lambda = lambda;
  ac.rho = e.rho;
  ac.max_iter = e.max_iter;
  ac.tol = e.admm_tol;
  FitResult admm = fit_admm(cov, ac);

  ConfigMap config;
  record_scenario(config, scenario, sflags.n);
  record_estimate(config, e, lambda);
  config["command"] = "bench-solver";
  config["seed"] = std::to_string(common.seed);
  OutputHeader header = make_header(common.seed, config);

  fs::create_directories(common.out_dir);
  write_traces_csv(common.out_dir + "/traces.csv", header,
                   {{"prisma", prisma.report}, {"admm", admm.report}});

  Json j;
  j["tool"] = std::string("ccs ") + kVersion;
  j["config_hash"] = header.config_hash;
  j["config"] = config_json(config);
  j["prisma_objective"] = prisma.report.final_objective;
  j["prisma_iterations"] = prisma.report.iterations;
  j["prisma_converged"] = prisma.report.converged;
  j["admm_objective"] = admm.report.final_objective;
  j["admm_iterations"] = admm.report.iterations;
  j["admm_converged"] = admm.report.converged;
  write_json(common.out_dir + "/report.json", j);
  return (prisma.report.converged && admm.report.converged) ? kExitOk : kExitNotConverged;
}

int cmd_coverage(const CommonFlags& common, const ScenarioFlags& sflags, const EstimateFlags& e,
                 double alpha, const std::string& rate, int replicates) {
  ScenarioSpec scenario = scenario_from(sflags, common.seed);
  RateMode mode = rate_mode_from_string(rate);
  IndexGrid grid = uniform_grid(e.grid_size);
  PrecisionPath path(scenario);
  MatStack truth = path.on_grid(grid);
  KernelKind kind = kernel_from_string(e.kernel);
  Centering centering = centering_from_string(e.centering);

  bool all_converged = true;
  std::vector<ConfidenceBand> bands;
  bands.reserve(static_cast<std::size_t>(replicates));
  double lambda = -1.0;
  for (int r = 0; r < replicates; ++r) {
    auto [sample, t] =
        sample_dataset(scenario, sflags.n, grid, Rng::derive(common.seed, static_cast<std::uint64_t>(r)));
    (void)t;
    double h = default_bandwidth(sflags.n, e.c_h, true);
    CovarianceField cov = local_covariance_field(sample, grid, h, kind, centering);
    lambda = e.lambda >= 0.0 ? e.lambda : default_lambda(sflags.n, scenario.p);
    SolverConfig cfg = solver_config(e, lambda);
    FitResult fit = fit_prisma_screened(cov, cfg);
    all_converged = all_converged && fit.report.converged;
    bands.push_back(confidence_band(fit.field, cov, sample, alpha, mode, kind, h));
  }
  CoverageSummary summary = coverage_tally(truth, bands, path.graph().edges);

  ConfigMap config;
  record_scenario(config, scenario, sflags.n);
  record_estimate(config, e, lambda);
  config["command"] = "coverage";
  config["seed"] = std::to_string(common.seed);
  config["alpha"] = format_double(alpha);
  config["rate"] = rate;
  config["replicates"] = std::to_string(replicates);
  OutputHeader header = make_header(common.seed, config);

  Json j;
  j["tool"] = std::string("ccs ") + kVersion;
  j["config_hash"] = header.config_hash;
  j["config"] = config_json(config);
  j["avgcov_S"] = summary.avgcov_S;
  j["avgcov_Sc"] = summary.avgcov_Sc;
  j["avglen_S"] = summary.avglen_S;
  j["avglen_Sc"] = summary.avglen_Sc;
  fs::create_directories(common.out_dir);
  write_json(common.out_dir + "/coverage.json", j);
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_scaling(const CommonFlags& common, const std::vector<std::string>& graphs,
                const std::vector<int>& p_list, const std::vector<double>& c_list,
                const std::string& path, int replicates, const EstimateFlags& e) {
  std::vector<GraphKind> kinds;
  kinds.reserve(graphs.size());
  for (const std::string& g : graphs) kinds.push_back(graph_from_string(g));

  FitOptions options;
  options.c_h = e.c_h;
  options.grid_size = e.grid_size;
  options.kernel = kernel_from_string(e.kernel);
  options.centering = centering_from_string(e.centering);
  options.solver = solver_config(e, 0.0);

  std::vector<ScalingRow> rows =
      run_scaling_experiment(kinds, p_list, c_list, path_from_string(path), replicates, options,
                             common.seed, e.lambda);

  auto join = [](const auto& items, auto&& fmt) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += ',';
      out += fmt(item);
    }
    return out;
  };
  ConfigMap config;
  record_estimate(config, e, e.lambda);
  if (e.lambda < 0.0) config["lambda"] = "auto";
  config["command"] = "scaling";
  config["seed"] = std::to_string(common.seed);
  config["graphs"] = join(graphs, [](const std::string& g) { return g; });
  config["p_list"] = join(p_list, [](int p) { return std::to_string(p); });
  config["C_list"] = join(c_list, [](double c) { return format_double(c); });
  config["path"] = path;
  config["replicates"] = std::to_string(replicates);
  OutputHeader header = make_header(common.seed, config);

  fs::create_directories(common.out_dir);
  std::ofstream out(common.out_dir + "/hamming.csv", std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: hamming.csv");
  out << header_line(header) << "kind,p,C,n,hamming\n";
  for (const ScalingRow& r : rows)
    out << to_string(r.kind) << ',' << r.p << ',' << format_double(r.C) << ',' << r.n << ','
        << format_double(r.mean_hamming) << '\n';
  return kExitOk;
}

}  // namespace

IndexedSample ingest_csv(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);

  std::string line;
  int line_no = 0;  // physical line counter, used in row-level error messages
  do {
    if (!std::getline(in, line)) throw ValidationError("empty file: " + path);
    ++line_no;
  } while (!line.empty() && line[0] == '#');
  std::vector<std::string> names;
  {
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        names.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    names.push_back(cur);
  }

  int z_index = -1;
  for (std::size_t j = 0; j < names.size(); ++j)
    if (names[j] == options.z_column) z_index = static_cast<int>(j);
  if (z_index < 0)
    throw ValidationError("column '" + options.z_column + "' not found in " + path);
  if (names.size() < 2) throw ValidationError("need at least one feature column besides z");

  std::vector<double> z;
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    cells.push_back(cur);
    if (cells.size() != names.size())
      throw ValidationError("row " + std::to_string(line_no) + ": expected " +
                            std::to_string(names.size()) + " cells, got " +
                            std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size() - 1);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v;
      try {
        v = parse_double(cells[j]);
      } catch (const ValidationError&) {
        throw ValidationError("row " + std::to_string(line_no) + ", column '" + names[j] +
                              "': non-numeric cell '" + cells[j] + "'");
      }
      if (static_cast<int>(j) == z_index)
        z.push_back(v);
      else
        row.push_back(v);
    }
    rows.push_back(std::move(row));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw ValidationError("no data rows in " + path);

  int n = static_cast<int>(rows.size());
  int p = static_cast<int>(rows[0].size());
  Matrix x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  if (options.log_returns) {
    if (n < 2) throw ValidationError("log-returns needs at least 2 rows");
    Matrix r(n - 1, p);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < p; ++j) {
        double prev = x(i - 1, j), curr = x(i, j);
        if (prev <= 0.0 || curr <= 0.0)
          throw ValidationError("log-returns requires positive values (row " +
                                std::to_string(row_lines[static_cast<std::size_t>(
                                    prev <= 0.0 ? i - 1 : i)]) +
                                ")");
        r(i - 1, j) = std::log(curr / prev);
      }
    x = std::move(r);
    z.erase(z.begin());
    n -= 1;
  }

  if (options.standardize) {
    for (int j = 0; j < p; ++j) {
      double mean = x.col(j).mean();
      double var = (x.col(j).array() - mean).square().sum() / n;
      if (var <= 0.0)
        throw ValidationError("cannot standardize constant column '" +
                              names[static_cast<std::size_t>(j >= z_index ? j + 1 : j)] + "'");
      x.col(j) = (x.col(j).array() - mean) / std::sqrt(var);
    }
  }

  double z_min = *std::min_element(z.begin(), z.end());
  double z_max = *std::max_element(z.begin(), z.end());
  if (z_max <= z_min) throw ValidationError("index column is constant; cannot rescale");
  for (double& v : z) v = (v - z_min) / (z_max - z_min);

  IndexedSample sample;
  sample.z = std::move(z);
  sample.x = std::move(x);
  sample.validate();
  return sample;
}

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"sparse conditional precision estimation"};
  app.require_subcommand(1);

  // simulate
  CommonFlags sim_common;
  ScenarioFlags sim_scenario;
  int sim_grid = 51;
  CLI::App* sim = app.add_subcommand("simulate", "draw a synthetic dataset");
  add_common(sim, sim_common);
  add_scenario(sim, sim_scenario);
  sim->add_option("--grid-size", sim_grid, "truth grid size");

  // fit
  CommonFlags fit_common;
  DataFlags fit_data;
  EstimateFlags fit_est;
  CLI::App* fit = app.add_subcommand("fit", "estimate the precision field");
  add_common(fit, fit_common);
  add_data(fit, fit_data);
  add_estimate(fit, fit_est);

  // ci
  CommonFlags ci_common;
  DataFlags ci_data;
  EstimateFlags ci_est;
  double ci_alpha = 0.05;
  std::string ci_rate = "undersmoothed";
  CLI::App* ci = app.add_subcommand("ci", "pointwise confidence intervals");
  add_common(ci, ci_common);
  add_data(ci, ci_data);
  add_estimate(ci, ci_est);
  ci->add_option("--alpha", ci_alpha, "miscoverage level");
  ci->add_option("--rate", ci_rate, "undersmoothed | theorem");

  // path
  CommonFlags path_common;
  ScenarioFlags path_scenario;
  EstimateFlags path_est;
  int path_count = 15, path_reps = 5;
  CLI::App* path = app.add_subcommand("path", "precision-recall curve over a lambda path");
  add_common(path, path_common);
  add_scenario(path, path_scenario);
  add_estimate(path, path_est, false);
  path->add_option("--lambda-count", path_count, "points on the lambda path");
  path->add_option("--replicates", path_reps, "independent datasets");

  // cv
  CommonFlags cv_common;
  DataFlags cv_data;
  EstimateFlags cv_est;
  int cv_folds = 5;
  std::string cv_mode = "both";
  CLI::App* cv = app.add_subcommand("cv", "cross-validated negative log-likelihood");
  add_common(cv, cv_common);
  add_data(cv, cv_data);
  add_estimate(cv, cv_est, false);
  cv->add_option("--folds", cv_folds, "fold count")->check(CLI::Range(2, 1000000));
  cv->add_option("--mode", cv_mode, "ccs | static_glasso | both");

  // bench-solver
  CommonFlags bench_common;
  ScenarioFlags bench_scenario;
  EstimateFlags bench_est;
  CLI::App* bench = app.add_subcommand("bench-solver", "PRISMA vs ADMM convergence traces");
  bench_scenario.p = 50;
  add_common(bench, bench_common);
  add_scenario(bench, bench_scenario);
  add_estimate(bench, bench_est, false);

  // coverage
  CommonFlags cov_common;
  ScenarioFlags cov_scenario;
  EstimateFlags cov_est;
  double cov_alpha = 0.025;
  std::string cov_rate = "undersmoothed";
  int cov_reps = 50;
  CLI::App* coverage = app.add_subcommand("coverage", "confidence band coverage study");
  cov_scenario.p = 10;
  cov_scenario.path = "random_walk";
  cov_est.grid_size = 25;
  add_common(coverage, cov_common);
  add_scenario(coverage, cov_scenario);
  add_estimate(coverage, cov_est, false);
  coverage->add_option("--alpha", cov_alpha, "miscoverage level");
  coverage->add_option("--rate", cov_rate, "undersmoothed | theorem");
  coverage->add_option("--replicates", cov_reps, "replicate datasets");

  // scaling
  CommonFlags scale_common;
  EstimateFlags scale_est;
  std::vector<std::string> scale_graphs{"chain"};
  std::vector<int> scale_p{10, 20};
  std::vector<double> scale_c{2.0, 4.0, 8.0};
  std::string scale_path = "sin";
  int scale_reps = 5;
  CLI::App* scaling = app.add_subcommand("scaling", "hamming distance vs rescaled sample size");
  add_common(scaling, scale_common);
  add_estimate(scaling, scale_est, false);
  scaling->add_option("--graphs", scale_graphs, "graph kinds")->delimiter(',');
  scaling->add_option("--p-list", scale_p, "node counts")->delimiter(',');
  scaling->add_option("--C-list", scale_c, "rescaled size constants")->delimiter(',');
  scaling->add_option("--path", scale_path, "precision path kind");
  scaling->add_option("--replicates", scale_reps, "replicates per cell");

  std::vector<std::string> tokens;
  std::vector<const char*> argv;

  try {
    tokens = merge_config(args);
    argv.reserve(tokens.size() + 1);
    argv.push_back("ccs");
    for (const std::string& a : tokens) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (sim->parsed()) return cmd_simulate(sim_common, sim_scenario, sim_grid);
    if (fit->parsed()) return cmd_fit(fit_common, fit_data, fit_est);
    if (ci->parsed()) return cmd_ci(ci_common, ci_data, ci_est, ci_alpha, ci_rate);
    if (path->parsed())
      return cmd_path(path_common, path_scenario, path_est, path_count, path_reps);
    if (cv->parsed()) return cmd_cv(cv_common, cv_data, cv_est, cv_folds, cv_mode);
    if (bench->parsed()) return cmd_bench(bench_common, bench_scenario, bench_est);
    if (coverage->parsed())
      return cmd_coverage(cov_common, cov_scenario, cov_est, cov_alpha, cov_rate, cov_reps);
    if (scaling->parsed())
      return cmd_scaling(scale_common, scale_graphs, scale_p, scale_c, scale_path, scale_reps,
                         scale_est);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}

}  // namespace ccs
