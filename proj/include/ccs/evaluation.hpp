#pragma once

#include <cstdint>
#include <vector>

#include "ccs/solvers.hpp"
#include "ccs/synthetic.hpp"
#include "ccs/types.hpp"

namespace ccs {

struct RecoveryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long hamming = 0;
};

// Precision = 1 - |est \ truth|/|est| (1 when est is empty), recall =
// 1 - |truth \ est|/|truth| (1 when truth is empty), f1 their harmonic mean
// (0 when both are 0), hamming = |est symmetric-difference truth|.
RecoveryMetrics recovery_metrics(const EdgeSet& estimated, const EdgeSet& truth);

// Mean over grid points of the squared Frobenius distance.
double frobenius_error(const MatStack& estimate, const MatStack& truth);

// Entrywise quadratic mean sqrt(mean of squares) over a list of equally
// shaped matrices.
Matrix quad_mean(const MatStack& stack);

// Smallest quadratic-mean entry over the edges of S; the signal strength.
double min_signal(const Matrix& qm, const EdgeSet& support);

// Shared estimation configuration for cross-validation and experiments.
struct FitOptions {
  double c_h = 1.0;
  int grid_size = 51;
  KernelKind kernel = KernelKind::epanechnikov;
  Centering centering = Centering::per_observation;
  SolverConfig solver;
};

enum class CvMode { ccs, static_glasso };

struct CvResult {
  double total = 0.0;
  std::vector<double> fold_totals;
  double std_error = 0.0;  // standard error of the fold totals
};

// K-fold cross-validated negative log-likelihood
// sum_folds sum_{i in fold} [-log det Omega_hat(z~^i) + x~^T Omega_hat(z~^i) x~].
// ccs mode fits on each training split and evaluates at test z via the
// nearest grid point; static_glasso fits one matrix on the pooled training
// covariance. Folds are contiguous blocks after a seeded shuffle.
CvResult cv_loss(const IndexedSample& sample, int folds, double lambda,
                 const FitOptions& options, CvMode mode, std::uint64_t seed);

struct PrCurveRow {
  double lambda = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double hamming = 0.0;  // mean over replicates
};

struct RecoveryExperiment {
  std::vector<PrCurveRow> rows;  // one per lambda, metrics averaged over replicates
  double best_lambda = 0.0;
  double best_f1 = 0.0;
};

// For each lambda: fit every replicate, average the recovery metrics against
// the scenario's true edge set. Replicate r redraws the data with sampling
// seed derived from (seed, r); the ground truth is fixed by the scenario.
// An empty lambda_path defaults to lambda_grid of the first replicate.
RecoveryExperiment run_recovery_experiment(const ScenarioSpec& scenario, int n,
                                           std::vector<double> lambda_path, int replicates,
                                           const FitOptions& options, std::uint64_t seed);

struct ScalingRow {
  GraphKind kind = GraphKind::chain;
  int p = 0;
  double C = 0.0;
  long n = 0;
  double mean_hamming = 0.0;
};

// Hamming distance against rescaled sample size n = ceil(C d^(5/2) (log p)^(5/4))
// at the default simulation penalty lambda = n^(-3/8) sqrt(log p).
// lambda_override < 0 selects the per-cell default n^(-3/8) sqrt(log p).
std::vector<ScalingRow> run_scaling_experiment(const std::vector<GraphKind>& kinds,
                                               const std::vector<int>& p_list,
                                               const std::vector<double>& C_list, PathKind path,
                                               int replicates, const FitOptions& options,
                                               std::uint64_t seed, double lambda_override = -1.0);

}  // namespace ccs
