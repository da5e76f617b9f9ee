// Acceptance gates for the conditional precision estimation artifact. Each
// criterion prints one PASS/FAIL line with its measured values; the process
// exits nonzero if any gate fails.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ccs/cli.hpp"
#include "ccs/evaluation.hpp"
#include "ccs/inference.hpp"
#include "ccs/io.hpp"
#include "ccs/kernels.hpp"
#include "ccs/local_moments.hpp"
#include "ccs/prox_ops.hpp"
#include "ccs/rng.hpp"
#include "ccs/solvers.hpp"
#include "ccs/synthetic.hpp"
#include "oracles.hpp"

using ccs::Matrix;
using ccs::MatStack;

namespace {

struct Gate {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Shrinkage and log-det proximal maps match independent numeric
//    minimization of their defining objectives.
Gate criterion_prox_oracle() {
  ccs::Rng rng(101);
  double worst = 0.0;

  for (int trial = 0; trial < 50; ++trial) {
    int p = 2 + static_cast<int>(rng.uniform_index(3));  // p in {2,3,4}
    int K = 1 + static_cast<int>(rng.uniform_index(3));  // K in {1,2,3}
    double t = rng.uniform(0.05, 0.8);
    MatStack stack;
    for (int k = 0; k < K; ++k) stack.push_back(oracles::rand_symmetric(rng, p, 1.0));

    MatStack got = ccs::group_prox(stack, t);

    // The objective splits per entry group; each group minimizer lies on the
    // ray through its input, so a scalar golden-section search is an
    // independent minimizer of 0.5*||s*dir - a||^2 + t*s.
    for (int u = 0; u < p; ++u)
      for (int v = 0; v < p; ++v) {
        double norm = 0.0;
        for (int k = 0; k < K; ++k) norm += stack[static_cast<std::size_t>(k)](u, v) *
                                            stack[static_cast<std::size_t>(k)](u, v);
        norm = std::sqrt(norm);
        double want_scale;
        if (u == v) {
          want_scale = 1.0;  // diagonals are not penalized
        } else if (norm == 0.0) {
          want_scale = 0.0;
        } else {
          auto phi = [&](double s) { return 0.5 * (s - norm) * (s - norm) + t * s; };
          double s_star = oracles::golden_min(phi, 0.0, norm + 1.0);
          if (s_star < 1e-9) s_star = 0.0;
          want_scale = s_star / norm;
        }
        for (int k = 0; k < K; ++k) {
          double want = want_scale * stack[static_cast<std::size_t>(k)](u, v);
          worst = std::max(worst,
                           std::abs(got[static_cast<std::size_t>(k)](u, v) - want));
        }
      }
  }

  for (int trial = 0; trial < 50; ++trial) {
    int p = 2 + static_cast<int>(rng.uniform_index(3));
    double L = rng.uniform(0.5, 1.5);
    Matrix a = oracles::rand_symmetric(rng, p, 0.8);
    Matrix got = ccs::logdet_prox(a, L);
    Matrix want = oracles::logdet_prox_gd(a, L, 20000);
    worst = std::max(worst, oracles::linf(got - want));
  }

  return {worst <= 1e-5, "max deviation " + fmt(worst) + " (limit 1e-05)"};
}

// ---------------------------------------------------------------------------
// 2. Log-det prox stationarity: L*Omega - Omega^-1 = L*A to 1e-8.
Gate criterion_logdet_kkt() {
  ccs::Rng rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int p = 2 + static_cast<int>(rng.uniform_index(19));  // p in [2,20]
    double L = rng.uniform(0.2, 5.0);
    Matrix a = oracles::rand_symmetric(rng, p, 1.0);
    Matrix omega = ccs::logdet_prox(a, L);
    Matrix residual = L * omega - omega.inverse() - L * a;
    worst = std::max(worst, oracles::linf(residual));
  }
  return {worst <= 1e-8, "max KKT residual " + fmt(worst) + " (limit 1e-08)"};
}

// ---------------------------------------------------------------------------
// 3. With no penalty and one grid point both solvers recover the exact
//    covariance inverse.
Gate criterion_unpenalized_exact() {
  ccs::Rng rng(303);
  Matrix sigma = oracles::rand_spd(rng, 10, 1.0);
  ccs::CovarianceField cov;
  cov.grid.points = {0.5};
  cov.matrices = {sigma};
  cov.h = 0.1;
  Matrix truth = sigma.inverse();

  ccs::SolverConfig pc;
  pc.lambda = 0.0;
  pc.rel_tol = 1e-16;
  pc.max_iter = 50000;
  double prisma_err = oracles::linf(ccs::fit_prisma(cov, pc).field.matrices[0] - truth);

  ccs::AdmmConfig ac;
  ac.lambda = 0.0;
  ac.tol = 1e-10;
  ac.max_iter = 20000;
  double admm_err = oracles::linf(ccs::fit_admm(cov, ac).field.matrices[0] - truth);

  bool pass = prisma_err <= 1e-6 && admm_err <= 1e-6;
  return {pass, "errors prisma " + fmt(prisma_err) + ", admm " + fmt(admm_err) +
                    " (limit 1e-06)"};
}

// ---------------------------------------------------------------------------
// 4. The two solvers agree on a smoothed-covariance problem at three
//    penalty levels: same objective to relative 1e-3, same support.
Gate criterion_cross_solver(double* seconds) {
  auto t0 = std::chrono::steady_clock::now();

  ccs::ScenarioSpec sc;
  sc.graph_kind = ccs::GraphKind::chain;
  sc.p = 10;
  sc.path = ccs::PathKind::sine;
  sc.seed = 4242;
  ccs::IndexGrid grid = ccs::uniform_grid(20);
  auto [sample, truth] = ccs::sample_dataset(sc, 200, grid, 4243);
  (void)truth;
  double h = ccs::default_bandwidth(200, 1.0, false);
  ccs::CovarianceField cov = ccs::local_covariance_field(
      sample, grid, h, ccs::KernelKind::epanechnikov, ccs::Centering::per_observation);

  double lmax = ccs::lambda_max(cov);
  double worst_rel = 0.0;
  bool supports_equal = true;
  for (double frac : {0.5, 0.2, 0.05}) {
    double lambda = frac * lmax;

    ccs::SolverConfig pc;
    pc.lambda = lambda;
    pc.schedule = ccs::BetaSchedule::inverse_k;
    pc.rel_tol = 1e-11;
    pc.max_iter = 6000;
    ccs::FitResult prisma = ccs::fit_prisma(cov, pc);

    ccs::AdmmConfig ac;
    ac.lambda = lambda;
    ac.tol = 1e-9;
    ac.max_iter = 20000;
    ccs::FitResult admm = ccs::fit_admm(cov, ac);

    // evaluate both final iterates through the same objective
    double obj_p = ccs::ccs_objective(prisma.field.matrices, cov, lambda);
    double obj_a = ccs::ccs_objective(admm.field.matrices, cov, lambda);
    double rel = std::abs(obj_p - obj_a) / std::max(1.0, std::abs(obj_a));
    worst_rel = std::max(worst_rel, rel);

    if (!(ccs::extract_support(prisma.field, 1e-4) == ccs::extract_support(admm.field, 1e-4)))
      supports_equal = false;
  }

  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = worst_rel <= 1e-3 && supports_equal && *seconds < 120.0;
  return {pass, "max relative objective gap " + fmt(worst_rel) + " (limit 1e-03), supports " +
                    (supports_equal ? "identical" : "DIFFER") + ", " + fmt(*seconds) +
                    " s (limit 120 s)"};
}

// ---------------------------------------------------------------------------
// 5. Screening: a penalty above the group-norm bound empties the support,
//    and component-wise solves match the joint solve on block structure.
Gate criterion_screening() {
  // part A: above the bound the screened solve is exactly diagonal
  ccs::ScenarioSpec sc;
  sc.graph_kind = ccs::GraphKind::chain;
  sc.p = 8;
  sc.path = ccs::PathKind::sine;
  sc.seed = 505;
  ccs::IndexGrid grid = ccs::uniform_grid(9);
  auto [sample, truth] = ccs::sample_dataset(sc, 150, grid, 506);
  (void)truth;
  ccs::CovarianceField cov =
      ccs::local_covariance_field(sample, grid, ccs::default_bandwidth(150, 1.0, false),
                                  ccs::KernelKind::epanechnikov, ccs::Centering::per_observation);
  ccs::SolverConfig above;
  above.lambda = 1.05 * ccs::lambda_max(cov);
  ccs::FitResult empty_fit = ccs::fit_prisma_screened(cov, above);
  int support_size = empty_fit.field.support.size();
  double max_offdiag = 0.0;
  for (const Matrix& m : empty_fit.field.matrices) {
    Matrix off = m;
    off.diagonal().setZero();
    max_offdiag = std::max(max_offdiag, oracles::linf(off));
  }

  // part B: block-diagonal covariance, joint vs screened objective
  ccs::Rng rng(515);
  ccs::CovarianceField block;
  block.grid.points = {0.25, 0.5, 0.75};
  block.h = 0.1;
  for (int k = 0; k < 3; ++k) {
    Matrix m = Matrix::Zero(6, 6);
    m.topLeftCorner(3, 3) = oracles::rand_spd(rng, 3, 0.5);
    m.bottomRightCorner(3, 3) = oracles::rand_spd(rng, 3, 0.5);
    block.matrices.push_back(m);
  }
  ccs::SolverConfig bc;
  bc.lambda = 0.05;
  bc.schedule = ccs::BetaSchedule::inverse_k;
  bc.rel_tol = 1e-13;
  bc.max_iter = 30000;
  std::size_t components = ccs::screen_components(block, bc.lambda).size();
  ccs::FitResult joint = ccs::fit_prisma(block, bc);
  ccs::FitResult screened = ccs::fit_prisma_screened(block, bc);
  double obj_joint = ccs::ccs_objective(joint.field.matrices, block, bc.lambda);
  double obj_screened = ccs::ccs_objective(screened.field.matrices, block, bc.lambda);
  double gap = std::abs(obj_joint - obj_screened);

  bool pass = support_size == 0 && max_offdiag == 0.0 && components >= 2 && gap <= 1e-5;
  return {pass, "above-bound support " + std::to_string(support_size) + ", max offdiag " +
                    fmt(max_offdiag) + "; block components " + std::to_string(components) +
                    ", objective gap " + fmt(gap) + " (limit 1e-05)"};
}

// ---------------------------------------------------------------------------
// 6. Graph recovery on a varying chain: index-adaptive fits recover the
//    graph; a single pooled graphical lasso cannot.
Gate criterion_recovery(double* seconds) {
  auto t0 = std::chrono::steady_clock::now();

  ccs::ScenarioSpec sc;
  sc.graph_kind = ccs::GraphKind::chain;
  sc.p = 20;
  sc.path = ccs::PathKind::sine;
  sc.seed = 606;
  const int n = 500, replicates = 5;
  const std::uint64_t seed = 607;

  ccs::FitOptions options;
  options.c_h = 0.75;
  // decaying smoothing so spurious group norms fall below the support
  // threshold instead of stalling at the constant-schedule bias level
  options.solver.schedule = ccs::BetaSchedule::inverse_k;
  options.solver.rel_tol = 1e-10;
  options.solver.max_iter = 4000;

  ccs::RecoveryExperiment ccs_exp =
      ccs::run_recovery_experiment(sc, n, {}, replicates, options, seed);

  // pooled static graphical lasso over its own penalty path, same datasets
  ccs::PrecisionPath path(sc);
  const ccs::EdgeSet& truth_edges = path.graph().edges;
  ccs::IndexGrid grid = ccs::uniform_grid(options.grid_size);

  std::vector<ccs::IndexedSample> samples;
  for (int r = 0; r < replicates; ++r)
    samples.push_back(
        ccs::sample_dataset(sc, n, grid, ccs::Rng::derive(seed, static_cast<std::uint64_t>(r)))
            .first);

  // penalty path anchored at the pooled covariance of the first replicate
  double glasso_lmax = 0.0;
  {
    const ccs::IndexedSample& s = samples[0];
    Matrix pooled = s.x.transpose() * s.x / static_cast<double>(s.n());
    Matrix off = pooled;
    off.diagonal().setZero();
    glasso_lmax = oracles::linf(off);
  }
  std::vector<double> glasso_path;
  for (int i = 0; i < 15; ++i)
    glasso_path.push_back(glasso_lmax * std::pow(100.0, -i / 14.0));

  ccs::SolverConfig gc;
  gc.schedule = ccs::BetaSchedule::inverse_k;
  gc.rel_tol = 1e-10;
  gc.max_iter = 4000;

  double glasso_best = 0.0;
  for (double lambda : glasso_path) {
    double mean_f1 = 0.0;
    for (const ccs::IndexedSample& s : samples) {
      gc.lambda = lambda;
      Matrix est = ccs::fit_glasso_static(s, lambda, gc);
      ccs::EdgeSet edges;
      for (int u = 0; u < sc.p; ++u)
        for (int v = u + 1; v < sc.p; ++v)
          if (std::abs(est(u, v)) > 1e-4) edges.insert(u, v);
      mean_f1 += ccs::recovery_metrics(edges, truth_edges).f1;
    }
    glasso_best = std::max(glasso_best, mean_f1 / replicates);
  }

  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double gap = ccs_exp.best_f1 - glasso_best;
  bool pass = ccs_exp.best_f1 >= 0.95 && gap >= 0.2 && *seconds < 600.0;
  return {pass, "adaptive best F1 " + fmt(ccs_exp.best_f1) + " (need >= 0.95), pooled best F1 " +
                    fmt(glasso_best) + ", gap " + fmt(gap) + " (need >= 0.2), " + fmt(*seconds) +
                    " s (limit 600 s)"};
}

// ---------------------------------------------------------------------------
// 7. Smoothed-covariance sup-error shrinks with n at the expected rate on a
//    constant-covariance data stream.
Gate criterion_deviation_rate(double* seconds) {
  auto t0 = std::chrono::steady_clock::now();

  ccs::Rng setup(707);
  Matrix sigma_star = oracles::rand_spd(setup, 5, 0.5);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma_star);
  Matrix sqrt_sigma = eig.operatorSqrt();
  ccs::IndexGrid grid = ccs::uniform_grid(51);

  std::vector<int> sizes{250, 1000, 4000};
  std::vector<double> errors;
  for (int n : sizes) {
    double total = 0.0;
    for (int s = 0; s < 10; ++s) {
      ccs::Rng rng(ccs::Rng::derive(708, static_cast<std::uint64_t>(n * 100 + s)));
      ccs::IndexedSample sample;
      sample.z.resize(static_cast<std::size_t>(n));
      sample.x = Matrix(n, 5);
      for (int i = 0; i < n; ++i) {
        sample.z[static_cast<std::size_t>(i)] = rng.uniform();
        Eigen::VectorXd g(5);
        for (int j = 0; j < 5; ++j) g(j) = rng.normal();
        sample.x.row(i) = (sqrt_sigma * g).transpose();
      }
      double h = std::pow(static_cast<double>(n), -0.2);
      ccs::CovarianceField cov = ccs::local_covariance_field(
          sample, grid, h, ccs::KernelKind::epanechnikov, ccs::Centering::none);
      double sup = 0.0;
      for (const Matrix& m : cov.matrices) sup = std::max(sup, oracles::linf(m - sigma_star));
      total += sup;
    }
    errors.push_back(total / 10.0);
  }

  double r1 = errors[1] / errors[0];
  double r2 = errors[2] / errors[1];
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = errors[0] > errors[1] && errors[1] > errors[2] && r1 >= 0.2 && r1 <= 0.9 &&
              r2 >= 0.2 && r2 <= 0.9 && *seconds < 300.0;
  return {pass, "mean sup-errors " + fmt(errors[0]) + " / " + fmt(errors[1]) + " / " +
                    fmt(errors[2]) + ", shrink factors " + fmt(r1) + ", " + fmt(r2) +
                    " (need within [0.2,0.9]), " + fmt(*seconds) + " s (limit 300 s)"};
}

// ---------------------------------------------------------------------------
// 8. Pointwise confidence bands cover the truth near the nominal level on
//    and off the support.
Gate criterion_coverage(double* seconds) {
  auto t0 = std::chrono::steady_clock::now();

  ccs::ScenarioSpec sc;
  sc.graph_kind = ccs::GraphKind::chain;
  sc.p = 10;
  sc.path = ccs::PathKind::random_walk;
  sc.seed = 808;
  const int n = 500, replicates = 50;
  const double alpha = 0.025;
  ccs::IndexGrid grid = ccs::uniform_grid(25);

  ccs::PrecisionPath path(sc);
  MatStack truth = path.on_grid(grid);
  double h = ccs::default_bandwidth(n, 1.0, true);
  double lambda = std::pow(static_cast<double>(n), -0.375) *
                  std::sqrt(std::log(static_cast<double>(sc.p)));

  std::vector<ccs::ConfidenceBand> bands;
  for (int r = 0; r < replicates; ++r) {
    auto [sample, truth_grid] =
        ccs::sample_dataset(sc, n, grid, ccs::Rng::derive(809, static_cast<std::uint64_t>(r)));
    (void)truth_grid;
    ccs::CovarianceField cov = ccs::local_covariance_field(
        sample, grid, h, ccs::KernelKind::epanechnikov, ccs::Centering::per_observation);
    ccs::SolverConfig cfg;
    cfg.lambda = lambda;
    ccs::FitResult fit = ccs::fit_prisma_screened(cov, cfg);
    bands.push_back(ccs::confidence_band(fit.field, cov, sample, alpha,
                                         ccs::RateMode::undersmoothed,
                                         ccs::KernelKind::epanechnikov, h));
  }
  ccs::CoverageSummary cs = ccs::coverage_tally(truth, bands, path.graph().edges);

  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = cs.avgcov_S >= 0.90 && cs.avgcov_S <= 1.0 && cs.avgcov_Sc >= 0.90 &&
              cs.avgcov_Sc <= 1.0 && *seconds < 1800.0;
  return {pass, "avg coverage on support " + fmt(cs.avgcov_S) + ", off support " +
                    fmt(cs.avgcov_Sc) + " (need within [0.90,1.0]), " + fmt(*seconds) +
                    " s (limit 1800 s)"};
}

// ---------------------------------------------------------------------------
// 9. The de-sparsified estimate equals its materialized Kronecker form.
Gate criterion_debias_equivalence() {
  ccs::Rng rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix omega = oracles::rand_spd(rng, 5, 0.6);
    Matrix sigma = oracles::rand_spd(rng, 5, 0.6);
    Eigen::VectorXd direct = oracles::vec(ccs::debias(omega, sigma));
    Eigen::VectorXd kron_form =
        oracles::vec(omega) -
        oracles::kron(omega, omega) * oracles::vec(Matrix(sigma - omega.inverse()));
    worst = std::max(worst, (direct - kron_form).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst) + " (limit 1e-10)"};
}

// ---------------------------------------------------------------------------
// 10. Quadratic-mean aggregation inequalities hold across random
//     matrix-list instances.
Gate criterion_norm_inequalities() {
  ccs::Rng rng(1010);
  const double tol = 1e-12;
  double worst_violation = -1e300;
  int failures = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    int p = 5 + static_cast<int>(rng.uniform_index(2));  // p in {5,6}
    const int count = 20;
    MatStack a_list, b_list, prod, sum;
    for (int i = 0; i < count; ++i) {
      a_list.push_back(oracles::rand_symmetric(rng, p, 1.0));
      b_list.push_back(oracles::rand_symmetric(rng, p, 1.0));
      prod.push_back(a_list.back() * b_list.back());
      sum.push_back(a_list.back() + b_list.back());
    }
    Matrix ha = oracles::quad_mean_ref(a_list);
    Matrix hb = oracles::quad_mean_ref(b_list);
    Matrix hab = oracles::quad_mean_ref(prod);
    Matrix hsum = oracles::quad_mean_ref(sum);

    double max_op = 0.0, max_inf = 0.0;
    for (const Matrix& m : a_list) {
      max_op = std::max(max_op, oracles::op_inf(m));
      max_inf = std::max(max_inf, oracles::linf(m));
    }

    double checks[5] = {
        oracles::op_inf(ha) - max_op,                              // row-sum contraction
        oracles::linf(ha) - max_inf,                               // entrywise contraction
        oracles::op_inf(hab) - oracles::op_inf(ha) * oracles::op_inf(hb),  // submultiplicative
        oracles::linf(hab) - oracles::linf(ha) * oracles::op_inf(hb),      // mixed product
        oracles::linf(hsum) - oracles::linf(Matrix(ha + hb)),      // triangle
    };
    for (double c : checks) {
      worst_violation = std::max(worst_violation, c);
      if (c > tol) ++failures;
    }
  }

  return {failures == 0, "violations " + std::to_string(failures) + "/5000, worst margin " +
                             fmt(worst_violation) + " (limit 1e-12)"};
}

// ---------------------------------------------------------------------------
// 11. A full simulate -> fit -> ci pipeline reproduces every output byte
//     when re-run with the same seed.
Gate criterion_determinism() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("ccs_accept_det_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string out = dir.string();

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  std::vector<std::string> captured[2];
  bool all_ok = true;
  for (int pass = 0; pass < 2; ++pass) {
    if (ccs::run_command({"simulate", "--seed", "99", "--p", "8", "--n", "200", "--out-dir",
                          out}) != 0)
      all_ok = false;
    for (const char* f : {"data.csv", "omega_true.csv", "scenario.txt"})
      captured[pass].push_back(slurp(dir / f));
    if (ccs::run_command({"fit", "--data", out + "/data.csv", "--seed", "99", "--grid-size",
                          "9", "--out-dir", out}) != 0)
      all_ok = false;
    for (const char* f : {"omega_grid.csv", "support.csv", "report.json"})
      captured[pass].push_back(slurp(dir / f));
    if (ccs::run_command({"ci", "--data", out + "/data.csv", "--seed", "99", "--grid-size",
                          "7", "--out-dir", out}) != 0)
      all_ok = false;
    for (const char* f : {"ci.csv", "report.json"})
      captured[pass].push_back(slurp(dir / f));
  }
  fs::remove_all(dir);

  int mismatches = 0;
  for (std::size_t i = 0; i < captured[0].size(); ++i)
    if (captured[0][i] != captured[1][i] || captured[0][i].empty()) ++mismatches;

  bool pass = all_ok && mismatches == 0;
  return {pass, std::string(all_ok ? "all commands exited 0" : "a command FAILED") + ", " +
                    std::to_string(captured[0].size() - static_cast<std::size_t>(mismatches)) +
                    "/" + std::to_string(captured[0].size()) + " files byte-identical"};
}

// ---------------------------------------------------------------------------
// 12. When the true precision genuinely varies with the index, the
//     index-adaptive fit wins cross-validation against a pooled fit.
Gate criterion_two_regime_cv(double* seconds) {
  auto t0 = std::chrono::steady_clock::now();

  const int p = 6, n = 400, folds = 5;
  // two chain-patterned regimes with opposite edge signs
  Matrix omega1 = Matrix::Identity(p, p), omega2 = Matrix::Identity(p, p);
  for (int u = 0; u + 1 < p; ++u) {
    omega1(u, u + 1) = omega1(u + 1, u) = 0.45;
    omega2(u, u + 1) = omega2(u + 1, u) = -0.45;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> e1(omega1.inverse()), e2(omega2.inverse());
  Matrix sqrt1 = e1.operatorSqrt(), sqrt2 = e2.operatorSqrt();

  double lambda = std::pow(static_cast<double>(n), -0.375) *
                  std::sqrt(std::log(static_cast<double>(p)));
  ccs::FitOptions options;
  options.grid_size = 25;

  int wins = 0;
  std::vector<std::string> losses;
  for (int s = 0; s < 5; ++s) {
    ccs::Rng rng(ccs::Rng::derive(1212, static_cast<std::uint64_t>(s)));
    ccs::IndexedSample sample;
    sample.z.resize(n);
    sample.x = Matrix(n, p);
    for (int i = 0; i < n; ++i) {
      double z = rng.uniform();
      sample.z[static_cast<std::size_t>(i)] = z;
      Eigen::VectorXd g(p);
      for (int j = 0; j < p; ++j) g(j) = rng.normal();
      sample.x.row(i) = ((z < 0.5 ? sqrt1 : sqrt2) * g).transpose();
    }
    ccs::CvResult adaptive = ccs::cv_loss(sample, folds, lambda, options, ccs::CvMode::ccs, 777);
    ccs::CvResult pooled =
        ccs::cv_loss(sample, folds, lambda, options, ccs::CvMode::static_glasso, 777);
    if (adaptive.total < pooled.total) ++wins;
    losses.push_back(fmt(adaptive.total) + "<" + fmt(pooled.total));
  }

  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = "adaptive beats pooled on " + std::to_string(wins) +
                       "/5 seeds (need >= 4); losses ";
  for (std::size_t i = 0; i < losses.size(); ++i)
    detail += (i ? ", " : "") + losses[i];
  return {wins >= 4, detail};
}

}  // namespace

int main() {
  struct Row {
    int index;
    const char* name;
    std::function<Gate(double*)> run;
  };
  auto timeless = [](Gate (*f)()) {
    return [f](double*) { return f(); };
  };

  std::vector<Row> rows = {
      {1, "proximal maps match numeric minimization", timeless(criterion_prox_oracle)},
      {2, "log-det prox stationarity", timeless(criterion_logdet_kkt)},
      {3, "unpenalized solves invert the covariance", timeless(criterion_unpenalized_exact)},
      {4, "solver cross-agreement", criterion_cross_solver},
      {5, "screening matches joint solves", timeless(criterion_screening)},
      {6, "varying-graph recovery beats pooled lasso", criterion_recovery},
      {7, "covariance sup-error shrinks at rate", criterion_deviation_rate},
      {8, "confidence band coverage", criterion_coverage},
      {9, "debias matches kronecker form", timeless(criterion_debias_equivalence)},
      {10, "quadratic-mean norm inequalities", timeless(criterion_norm_inequalities)},
      {11, "pipeline byte determinism", timeless(criterion_determinism)},
      {12, "adaptive fit wins two-regime cross-validation", criterion_two_regime_cv},
  };

  int failed = 0;
  for (const Row& row : rows) {
    auto t0 = std::chrono::steady_clock::now();
    double inner_seconds = 0.0;
    Gate gate;
    try {
      gate = row.run(&inner_seconds);
    } catch (const std::exception& e) {
      gate = {false, std::string("exception: ") + e.what()};
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s -- %s [%.1f s]\n", gate.pass ? "PASS" : "FAIL",
                row.index, row.name, gate.detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!gate.pass) ++failed;
  }

  if (failed == 0) {
    std::printf("acceptance: all 12 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failed);
  return 1;
}
