#pragma once

#include <vector>

#include "ccs/types.hpp"

namespace ccs {

// Penalized local negative log-likelihood over the grid:
//   sum_k [tr(Sigma_hat(z_k) Omega(z_k)) - log det Omega(z_k)] + penalty.
// The group penalty is lambda * sum over ordered pairs (u,v), u != v, of the
// raw group norm sqrt(sum_k Omega_uv(z_k)^2); both mirror pairs count, so the
// effective weight per unordered pair is 2*lambda. The l1 penalty sums
// |Omega_uv(z_k)| over ordered off-diagonal pairs and grid points.
// Throws NonPDError when a stack matrix is not positive definite.
double ccs_objective(const MatStack& stack, const CovarianceField& cov, double lambda,
                     PenaltyKind penalty = PenaltyKind::group);

// Proximal iterative smoothing on the objective above. The non-smooth penalty
// is replaced by its beta-Moreau envelope; each iteration takes a gradient
// step on the smooth part followed by the log-det proximal map, with Nesterov
// extrapolation. Returns the last Theta iterate, which is always PD.
FitResult fit_prisma(const CovarianceField& cov, const SolverConfig& config);

// Consensus ADMM reference solver on the same objective with the split
// Omega(z_k) = Psi(z_k): Omega-update is a log-det prox per grid point,
// Psi-update a group (or l1) prox, followed by a scaled dual update.
// Terminates when max(primal, dual) residual <= tol. The returned matrices
// are the PD Omega block; group norms and support come from the exactly
// sparse Psi block.
FitResult fit_admm(const CovarianceField& cov, const AdmmConfig& config);

// Graphical lasso on the pooled sample covariance, ignoring z. Reuses the
// PRISMA machinery with the l1 prox on a one-point grid.
Matrix fit_glasso_static(const IndexedSample& sample, double lambda, const SolverConfig& config);

// Graphical lasso on the kernel-smoothed covariance at the single point tau.
Matrix fit_pointwise_lasso(const IndexedSample& sample, double tau, double h, KernelKind kind,
                           double lambda, const SolverConfig& config);

// Unordered pairs whose quadratic-mean group norm exceeds tol.
EdgeSet extract_support(const PrecisionField& field, double tol);

// Connected components of the graph with edges where the raw group norm of
// Sigma_hat exceeds lambda. The solution support cannot cross components, so
// each may be solved separately and assembled block-diagonally.
std::vector<std::vector<int>> screen_components(const CovarianceField& cov, double lambda);

// Largest raw group norm over off-diagonal pairs of Sigma_hat; above this the
// fitted support is empty.
double lambda_max(const CovarianceField& cov);

// count values log-spaced from lambda_max down to lambda_max/100, descending.
std::vector<double> lambda_grid(const CovarianceField& cov, int count);

// Screen at config.lambda, solve each component independently, assemble the
// block-diagonal solution. Identical minimizer to fit_prisma on the whole
// problem; much faster when the screen graph is disconnected.
FitResult fit_prisma_screened(const CovarianceField& cov, const SolverConfig& config);

}  // namespace ccs
