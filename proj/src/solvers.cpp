#include "ccs/solvers.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ccs/evaluation.hpp"
#include "ccs/local_moments.hpp"
#include "ccs/prox_ops.hpp"

namespace ccs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// log det via Cholesky; throws NonPDError when the factorization fails.
double logdet_pd(const Matrix& m, const char* who) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NonPDError(std::string(who) + ": matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double penalty_value(const MatStack& stack, double lambda, PenaltyKind penalty) {
  if (lambda == 0.0) return 0.0;
  double total = 0.0;
  if (penalty == PenaltyKind::group) {
    Matrix g = group_norms_raw(stack);
    total = g.sum() - g.diagonal().sum();
  } else {
    for (const Matrix& m : stack) total += m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
  }
  return lambda * total;
}

MatStack apply_prox(const MatStack& stack, double t, PenaltyKind penalty) {
  if (penalty == PenaltyKind::group) return group_prox(stack, t);
  return soft_threshold_prox(stack, t);
}

MatStack diagonal_init(const MatStack& covs) {
  MatStack omega;
  omega.reserve(covs.size());
  for (const Matrix& c : covs) {
    Vector d = (c.diagonal().array() + 1e-6).inverse();
    omega.push_back(Matrix(d.asDiagonal()));
  }
  return omega;
}

double objective_raw(const MatStack& stack, const MatStack& covs, double lambda,
                     PenaltyKind penalty) {
  double val = 0.0;
  for (std::size_t k = 0; k < stack.size(); ++k) {
    val += covs[k].cwiseProduct(stack[k]).sum();
    val -= logdet_pd(stack[k], "ccs_objective");
  }
  return val + penalty_value(stack, lambda, penalty);
}

struct CoreResult {
  MatStack theta;
  SolveReport report;
};

// Algorithm core shared by fit_prisma, fit_glasso_static, fit_pointwise_lasso.
// The first two iterations revisit the start point (alpha_1 = 0 makes the
// first extrapolation step back onto Theta_0), so the objective-change test is
// armed only from iteration 3 on.
CoreResult prisma_core(const MatStack& covs, const SolverConfig& config) {
  config.validate();
  auto t0 = Clock::now();

  MatStack omega = diagonal_init(covs);
  MatStack theta_prev = omega;
  double alpha = 0.0;

  SolveReport report;
  report.objective_trace.push_back(objective_raw(theta_prev, covs, config.lambda, config.penalty));
  report.time_trace.push_back(seconds_since(t0));

  std::size_t K = covs.size();
  for (int k = 1; k <= config.max_iter; ++k) {
    double beta_k =
        config.schedule == BetaSchedule::constant ? config.beta : config.beta / k;
    double L_k = config.L_f + 1.0 / beta_k;

    MatStack theta(K);
    if (config.lambda > 0.0) {
      MatStack prox = apply_prox(omega, beta_k * config.lambda, config.penalty);
      for (std::size_t i = 0; i < K; ++i) {
        Matrix u = omega[i] - prox[i];
        theta[i] = logdet_prox(omega[i] - (covs[i] + u / beta_k) / L_k, L_k);
      }
    } else {
      for (std::size_t i = 0; i < K; ++i)
        theta[i] = logdet_prox(omega[i] - covs[i] / L_k, L_k);
    }

    double alpha_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha));
    double mix = (alpha - 1.0) / alpha_next;
    for (std::size_t i = 0; i < K; ++i)
      omega[i] = theta[i] + mix * (theta[i] - theta_prev[i]);

    double f = objective_raw(theta, covs, config.lambda, config.penalty);
    double f_prev = report.objective_trace.back();
    report.objective_trace.push_back(f);
    report.time_trace.push_back(seconds_since(t0));
    report.iterations = k;

    theta_prev = std::move(theta);
    alpha = alpha_next;

    double rel = std::abs(f - f_prev) / std::max({std::abs(f), std::abs(f_prev), 1.0});
    if (k >= 3 && rel <= config.rel_tol) {
      report.converged = true;
      break;
    }
  }

  report.final_objective = report.objective_trace.back();
  report.wall_time = seconds_since(t0);
  return {std::move(theta_prev), std::move(report)};
}

PrecisionField make_field(const IndexGrid& grid, MatStack matrices, const MatStack& norm_source,
                          double support_tol) {
  PrecisionField field;
  field.grid = grid;
  field.group_norms = quad_mean(norm_source);
  field.matrices = std::move(matrices);
  Eigen::Index p = field.group_norms.rows();
  for (Eigen::Index u = 0; u < p; ++u)
    for (Eigen::Index v = u + 1; v < p; ++v)
      if (field.group_norms(u, v) > support_tol)
        field.support.insert(static_cast<int>(u), static_cast<int>(v));
  return field;
}

void check_cov(const CovarianceField& cov) {
  cov.grid.validate();
  if (cov.matrices.size() != cov.grid.points.size())
    throw DimensionError("covariance field: one matrix per grid point required");
  if (cov.matrices.empty()) throw ValidationError("covariance field: empty");
}

}  // namespace

double ccs_objective(const MatStack& stack, const CovarianceField& cov, double lambda,
                     PenaltyKind penalty) {
  check_cov(cov);
  if (stack.size() != cov.matrices.size())
    throw DimensionError("ccs_objective: stack and field grids differ");
  return objective_raw(stack, cov.matrices, lambda, penalty);
}

FitResult fit_prisma(const CovarianceField& cov, const SolverConfig& config) {
  check_cov(cov);
  CoreResult core = prisma_core(cov.matrices, config);
  PrecisionField field =
      make_field(cov.grid, core.theta, core.theta, config.support_tol);
  return {std::move(field), std::move(core.report)};
}

FitResult fit_admm(const CovarianceField& cov, const AdmmConfig& config) {
  check_cov(cov);
  config.validate();
  auto t0 = Clock::now();

  std::size_t K = cov.matrices.size();
  MatStack psi = diagonal_init(cov.matrices);
  MatStack omega = psi;
  MatStack w(K);
  Eigen::Index p = cov.matrices[0].rows();
  for (std::size_t i = 0; i < K; ++i) w[i] = Matrix::Zero(p, p);

  SolveReport report;
  report.objective_trace.push_back(
      objective_raw(omega, cov.matrices, config.lambda, config.penalty));
  report.time_trace.push_back(seconds_since(t0));

  for (int k = 1; k <= config.max_iter; ++k) {
    for (std::size_t i = 0; i < K; ++i)
      omega[i] = logdet_prox(psi[i] - w[i] - cov.matrices[i] / config.rho, config.rho);

    MatStack v(K);
    for (std::size_t i = 0; i < K; ++i) v[i] = omega[i] + w[i];
    MatStack psi_next =
        config.lambda > 0.0 ? apply_prox(v, config.lambda / config.rho, config.penalty)
                            : std::move(v);

    double primal_sq = 0.0, dual_sq = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      primal_sq += (omega[i] - psi_next[i]).squaredNorm();
      dual_sq += (psi_next[i] - psi[i]).squaredNorm();
      w[i] += omega[i] - psi_next[i];
    }
    psi = std::move(psi_next);

    report.objective_trace.push_back(
        objective_raw(omega, cov.matrices, config.lambda, config.penalty));
    report.time_trace.push_back(seconds_since(t0));
    report.iterations = k;

    double primal = std::sqrt(primal_sq);
    double dual = config.rho * std::sqrt(dual_sq);
    if (std::max(primal, dual) <= config.tol) {
      report.converged = true;
      break;
    }
  }

  report.final_objective = report.objective_trace.back();
  report.wall_time = seconds_since(t0);

  // Omega block is PD; Psi block is exactly sparse and defines the support.
  PrecisionField field = make_field(cov.grid, std::move(omega), psi, 0.0);
  return {std::move(field), std::move(report)};
}

Matrix fit_glasso_static(const IndexedSample& sample, double lambda,
                         const SolverConfig& config) {
  sample.validate();
  if (sample.n() < 2) throw ValidationError("fit_glasso_static: need at least 2 observations");
  Vector mean = sample.x.colwise().mean();
  Matrix centered = sample.x.rowwise() - mean.transpose();
  Matrix pooled = (centered.transpose() * centered) / static_cast<double>(sample.n());
  pooled = 0.5 * (pooled + pooled.transpose());

  SolverConfig c = config;
  c.lambda = lambda;
  c.penalty = PenaltyKind::l1;
  CoreResult core = prisma_core(MatStack{pooled}, c);
  return core.theta[0];
}

Matrix fit_pointwise_lasso(const IndexedSample& sample, double tau, double h, KernelKind kind,
                           double lambda, const SolverConfig& config) {
  if (tau < 0.0 || tau > 1.0)
    throw ValidationError("fit_pointwise_lasso: tau must lie in [0,1]");
  IndexGrid grid;
  grid.points = {tau};
  CovarianceField cov = local_covariance_field(sample, grid, h, kind, Centering::per_observation);

  SolverConfig c = config;
  c.lambda = lambda;
  c.penalty = PenaltyKind::l1;
  CoreResult core = prisma_core(cov.matrices, c);
  return core.theta[0];
}

EdgeSet extract_support(const PrecisionField& field, double tol) {
  if (tol < 0.0) throw ValidationError("extract_support: tol must be non-negative");
  EdgeSet out;
  Eigen::Index p = field.group_norms.rows();
  for (Eigen::Index u = 0; u < p; ++u)
    for (Eigen::Index v = u + 1; v < p; ++v)
      if (field.group_norms(u, v) > tol) out.insert(static_cast<int>(u), static_cast<int>(v));
  return out;
}

std::vector<std::vector<int>> screen_components(const CovarianceField& cov, double lambda) {
  check_cov(cov);
  if (!(lambda > 0.0)) throw ValidationError("screen_components: lambda must be positive");
  int p = cov.p();
  Matrix g = group_norms_raw(cov.matrices);

  std::vector<int> parent(static_cast<std::size_t>(p));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (int u = 0; u < p; ++u)
    for (int v = u + 1; v < p; ++v)
      if (g(u, v) > lambda) {
        int ru = find(u), rv = find(v);
        if (ru != rv) parent[static_cast<std::size_t>(std::max(ru, rv))] = std::min(ru, rv);
      }

  std::vector<std::vector<int>> components;
  std::vector<int> label(static_cast<std::size_t>(p), -1);
  for (int u = 0; u < p; ++u) {
    int r = find(u);
    if (label[static_cast<std::size_t>(r)] < 0) {
      label[static_cast<std::size_t>(r)] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(label[static_cast<std::size_t>(r)])].push_back(u);
  }
  return components;
}

double lambda_max(const CovarianceField& cov) {
  check_cov(cov);
  Matrix g = group_norms_raw(cov.matrices);
  double best = 0.0;
  Eigen::Index p = g.rows();
  for (Eigen::Index u = 0; u < p; ++u)
    for (Eigen::Index v = u + 1; v < p; ++v) best = std::max(best, g(u, v));
  return best;
}

std::vector<double> lambda_grid(const CovarianceField& cov, int count) {
  if (count < 2) throw ValidationError("lambda_grid: count must be at least 2");
  double lmax = lambda_max(cov);
  if (!(lmax > 0.0))
    throw ValidationError("lambda_grid: screening bound is zero, off-diagonals vanish");
  std::vector<double> grid(static_cast<std::size_t>(count));
  double log_max = std::log(lmax);
  double log_min = std::log(lmax / 100.0);
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] =
        std::exp(log_max + (log_min - log_max) * static_cast<double>(i) / (count - 1));
  return grid;
}

FitResult fit_prisma_screened(const CovarianceField& cov, const SolverConfig& config) {
  check_cov(cov);
  config.validate();
  if (!(config.lambda > 0.0)) return fit_prisma(cov, config);

  auto t0 = Clock::now();
  std::vector<std::vector<int>> components = screen_components(cov, config.lambda);
  std::size_t K = cov.matrices.size();
  int p = cov.p();

  MatStack assembled(K);
  for (std::size_t i = 0; i < K; ++i) assembled[i] = Matrix::Zero(p, p);

  SolveReport report;
  report.converged = true;

  for (const std::vector<int>& comp : components) {
    MatStack sub(K);
    int q = static_cast<int>(comp.size());
    for (std::size_t i = 0; i < K; ++i) {
      sub[i].resize(q, q);
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
          sub[i](a, b) = cov.matrices[i](comp[static_cast<std::size_t>(a)],
                                         comp[static_cast<std::size_t>(b)]);
    }
    CoreResult core = prisma_core(sub, config);
    report.converged = report.converged && core.report.converged;
    report.iterations = std::max(report.iterations, core.report.iterations);
    for (std::size_t i = 0; i < K; ++i)
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
          assembled[i](comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(b)]) =
              core.theta[i](a, b);
  }

  report.final_objective =
      objective_raw(assembled, cov.matrices, config.lambda, config.penalty);
  report.objective_trace.push_back(report.final_objective);
  report.wall_time = seconds_since(t0);
  report.time_trace.push_back(report.wall_time);

  PrecisionField field = make_field(cov.grid, assembled, assembled, config.support_tol);
  return {std::move(field), std::move(report)};
}

}  // namespace ccs
