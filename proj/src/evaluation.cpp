#include "ccs/evaluation.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ccs/kernels.hpp"
#include "ccs/local_moments.hpp"
#include "ccs/rng.hpp"

namespace ccs {

namespace {

// Set difference size |a \ b|.
int diff_size(const EdgeSet& a, const EdgeSet& b) {
  int count = 0;
  for (const auto& e : a.edges)
    if (b.edges.count(e) == 0) ++count;
  return count;
}

double logdet_pd_or_throw(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NonPDError("cv_loss: precision estimate is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

RecoveryMetrics recovery_metrics(const EdgeSet& estimated, const EdgeSet& truth) {
  RecoveryMetrics m;
  int fp = diff_size(estimated, truth);
  int fn = diff_size(truth, estimated);
  m.precision = estimated.size() == 0 ? 1.0 : 1.0 - static_cast<double>(fp) / estimated.size();
  m.recall = truth.size() == 0 ? 1.0 : 1.0 - static_cast<double>(fn) / truth.size();
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.hamming = fp + fn;
  return m;
}

double frobenius_error(const MatStack& estimate, const MatStack& truth) {
  if (estimate.size() != truth.size() || estimate.empty())
    throw DimensionError("frobenius_error: grids must match and be non-empty");
  double total = 0.0;
  for (std::size_t k = 0; k < estimate.size(); ++k) {
    if (estimate[k].rows() != truth[k].rows() || estimate[k].cols() != truth[k].cols())
      throw DimensionError("frobenius_error: matrix shapes must match");
    total += (estimate[k] - truth[k]).squaredNorm();
  }
  return total / static_cast<double>(estimate.size());
}

Matrix quad_mean(const MatStack& stack) {
  if (stack.empty()) throw ValidationError("quad_mean: empty list");
  Eigen::Index r = stack[0].rows(), c = stack[0].cols();
  Matrix sum = Matrix::Zero(r, c);
  for (const Matrix& m : stack) {
    if (m.rows() != r || m.cols() != c)
      throw DimensionError("quad_mean: all matrices must share a shape");
    sum += m.cwiseProduct(m);
  }
  return (sum / static_cast<double>(stack.size())).cwiseSqrt();
}

double min_signal(const Matrix& qm, const EdgeSet& support) {
  if (support.size() == 0) throw ValidationError("min_signal: empty edge set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : support.edges) best = std::min(best, qm(e.first, e.second));
  return best;
}

CvResult cv_loss(const IndexedSample& sample, int folds, double lambda,
                 const FitOptions& options, CvMode mode, std::uint64_t seed) {
  sample.validate();
  int n = sample.n(), p = sample.p();
  if (folds < 2 || folds > n) throw ValidationError("cv_loss: folds must lie in [2, n]");

  // Contiguous fold blocks over a seeded shuffle of the observation order.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(Rng::derive(seed, 0x63766f6c));  // fold stream
  rng.shuffle(order);

  CvResult result;
  result.fold_totals.reserve(static_cast<std::size_t>(folds));

  for (int f = 0; f < folds; ++f) {
    int lo = static_cast<int>(static_cast<long>(f) * n / folds);
    int hi = static_cast<int>(static_cast<long>(f + 1) * n / folds);
    int n_test = hi - lo, n_train = n - n_test;
    if (n_test == 0) throw ValidationError("cv_loss: empty fold");

    IndexedSample train;
    train.z.reserve(static_cast<std::size_t>(n_train));
    train.x.resize(n_train, p);
    IndexedSample test;
    test.z.reserve(static_cast<std::size_t>(n_test));
    test.x.resize(n_test, p);
    int it = 0, iv = 0;
    for (int i = 0; i < n; ++i) {
      int row = order[static_cast<std::size_t>(i)];
      if (i >= lo && i < hi) {
        test.z.push_back(sample.z[static_cast<std::size_t>(row)]);
        test.x.row(iv++) = sample.x.row(row);
      } else {
        train.z.push_back(sample.z[static_cast<std::size_t>(row)]);
        train.x.row(it++) = sample.x.row(row);
      }
    }

    double fold_loss = 0.0;
    if (mode == CvMode::ccs) {
      double h = default_bandwidth(n_train, options.c_h, false);
      IndexGrid grid = uniform_grid(options.grid_size);
      CovarianceField cov =
          local_covariance_field(train, grid, h, options.kernel, options.centering);
      SolverConfig cfg = options.solver;
      cfg.lambda = lambda;
      FitResult fit = fit_prisma(cov, cfg);
      if (!fit.report.converged)
        throw Error("cv_loss: solver did not converge on fold " + std::to_string(f));
      for (int i = 0; i < n_test; ++i) {
        Matrix omega = interpolate_field(grid, fit.field.matrices,
                                         test.z[static_cast<std::size_t>(i)], InterpMode::nearest);
        Vector xi = test.x.row(i).transpose();
        fold_loss += -logdet_pd_or_throw(omega) + xi.dot(omega * xi);
      }
    } else {
      Matrix omega = fit_glasso_static(train, lambda, options.solver);
      double ld = logdet_pd_or_throw(omega);
      for (int i = 0; i < n_test; ++i) {
        Vector xi = test.x.row(i).transpose();
        fold_loss += -ld + xi.dot(omega * xi);
      }
    }
    result.fold_totals.push_back(fold_loss);
    result.total += fold_loss;
  }

  double mean = result.total / folds;
  double ss = 0.0;
  for (double v : result.fold_totals) ss += (v - mean) * (v - mean);
  result.std_error = folds > 1 ? std::sqrt(ss / (folds - 1) / folds) : 0.0;
  return result;
}

RecoveryExperiment run_recovery_experiment(const ScenarioSpec& scenario, int n,
                                           std::vector<double> lambda_path, int replicates,
                                           const FitOptions& options, std::uint64_t seed) {
  if (replicates < 1) throw ValidationError("run_recovery_experiment: need replicates >= 1");
  PrecisionPath truth_path(scenario);
  const EdgeSet& truth = truth_path.graph().edges;
  IndexGrid grid = uniform_grid(options.grid_size);
  double h = default_bandwidth(n, options.c_h, false);

  std::vector<CovarianceField> covs;
  covs.reserve(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    auto [sample, omega_true] = sample_dataset(scenario, n, grid, Rng::derive(seed, static_cast<std::uint64_t>(r)));
    (void)omega_true;
    covs.push_back(local_covariance_field(sample, grid, h, options.kernel, options.centering));
  }
  if (lambda_path.empty()) lambda_path = lambda_grid(covs[0], 15);

  RecoveryExperiment out;
  out.rows.reserve(lambda_path.size());
  for (double lambda : lambda_path) {
    PrCurveRow row;
    row.lambda = lambda;
    for (const CovarianceField& cov : covs) {
      SolverConfig cfg = options.solver;
      cfg.lambda = lambda;
      FitResult fit = fit_prisma_screened(cov, cfg);
      RecoveryMetrics m = recovery_metrics(fit.field.support, truth);
      row.precision += m.precision;
      row.recall += m.recall;
      row.f1 += m.f1;
      row.hamming += static_cast<double>(m.hamming);
    }
    row.precision /= replicates;
    row.recall /= replicates;
    row.f1 /= replicates;
    row.hamming /= replicates;
    out.rows.push_back(row);
    if (row.f1 > out.best_f1) {
      out.best_f1 = row.f1;
      out.best_lambda = lambda;
    }
  }
  return out;
}

std::vector<ScalingRow> run_scaling_experiment(const std::vector<GraphKind>& kinds,
                                               const std::vector<int>& p_list,
                                               const std::vector<double>& C_list, PathKind path,
                                               int replicates, const FitOptions& options,
                                               std::uint64_t seed, double lambda_override) {
  if (kinds.empty() || p_list.empty() || C_list.empty())
    throw ValidationError("run_scaling_experiment: empty input lists");
  std::vector<ScalingRow> rows;
  std::uint64_t cell = 0;
  for (GraphKind kind : kinds) {
    for (int p : p_list) {
      for (double C : C_list) {
        ScenarioSpec scenario;
        scenario.graph_kind = kind;
        scenario.p = p;
        scenario.path = path;
        scenario.seed = Rng::derive(seed, 0x7363 + cell);

        // d comes from the realized graph; n is then fixed across replicates.
        PrecisionPath truth_path(scenario);
        int d = truth_path.graph().max_degree;
        long n = static_cast<long>(
            std::ceil(C * std::pow(d, 2.5) * std::pow(std::log(p), 1.25)));
        n = std::max<long>(n, 10);
        double lambda = lambda_override >= 0.0
                            ? lambda_override
                            : std::pow(static_cast<double>(n), -0.375) * std::sqrt(std::log(p));

        IndexGrid grid = uniform_grid(options.grid_size);
        double h = default_bandwidth(static_cast<int>(n), options.c_h, false);
        double hamming_sum = 0.0;
        for (int r = 0; r < replicates; ++r) {
          auto [sample, omega_true] = sample_dataset(
              scenario, static_cast<int>(n), grid,
              Rng::derive(seed, cell * 1000003ULL + static_cast<std::uint64_t>(r)));
          (void)omega_true;
          CovarianceField cov =
              local_covariance_field(sample, grid, h, options.kernel, options.centering);
          SolverConfig cfg = options.solver;
          cfg.lambda = lambda;
          FitResult fit = fit_prisma_screened(cov, cfg);
          RecoveryMetrics m = recovery_metrics(fit.field.support, truth_path.graph().edges);
          hamming_sum += static_cast<double>(m.hamming);
        }
        rows.push_back({kind, p, C, n, hamming_sum / replicates});
        ++cell;
      }
    }
  }
  return rows;
}

}  // namespace ccs
