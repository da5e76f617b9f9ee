#pragma once

#include <vector>

#include "ccs/types.hpp"

namespace ccs {

// De-sparsified estimate T = 2*Omega - Omega*Sigma*Omega. Equal to the
// Kronecker form vec(Omega) - (Omega (x) Omega) vec(Sigma - Omega^-1)
// without materializing the p^2 x p^2 product.
Matrix debias(const Matrix& omega, const Matrix& sigma);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// Phi^-1(p) for p in (0,1); rational approximation refined by one Halley
// step, absolute error below 1e-9.
double normal_quantile(double p);

struct ConfidenceBand {
  IndexGrid grid;
  double alpha = 0.05;
  RateMode rate = RateMode::undersmoothed;
  MatStack point;  // debiased estimates per grid point
  MatStack lower;
  MatStack upper;
};

// Pointwise bands: per grid point z and pair (u,v),
//   point = debias(Omega_hat(z), Sigma_hat(z))_uv
//   half width = Phi^-1(1-alpha/2) n^-r sqrt((Omega_uv^2 + Omega_uu Omega_vv)
//                / f_hat(z) * integral K^2)
// with r = 3/8 under-smoothed (default) or r = 2/5 theorem mode, whose O(1)
// bias is not corrected. The density f_hat uses the same kernel and bandwidth.
ConfidenceBand confidence_band(const PrecisionField& field, const CovarianceField& cov,
                               const IndexedSample& sample, double alpha, RateMode rate,
                               KernelKind kind, double h);

struct CoverageSummary {
  double avgcov_S = 0.0;
  double avgcov_Sc = 0.0;
  double avglen_S = 0.0;
  double avglen_Sc = 0.0;
  Matrix per_pair_coverage;  // alpha_hat_uv over grid points and replicates
};

// Empirical coverage of the truth by the replicate bands, averaged per pair
// over grid points and replicates, then over the support and its complement
// (off-diagonal pairs only).
CoverageSummary coverage_tally(const MatStack& truth, const std::vector<ConfidenceBand>& bands,
                               const EdgeSet& support);

}  // namespace ccs
