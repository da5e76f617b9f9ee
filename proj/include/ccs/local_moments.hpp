#pragma once

#include "ccs/types.hpp"

namespace ccs {

// K equally spaced points 0, 1/(K-1), ..., 1; K >= 2.
IndexGrid uniform_grid(int K);

// m_hat(z) = sum_i w^i(z) x^i.
Vector local_mean(const IndexedSample& sample, double z_query, double h, KernelKind kind);

// Sigma_hat(z_k) per grid point. Centering picks what each observation is
// centered by: its own local mean m_hat(z^i), the query-point mean m_hat(z_k),
// or nothing (zero-mean model). Matrices are symmetrized on assembly.
CovarianceField local_covariance_field(const IndexedSample& sample, const IndexGrid& grid,
                                       double h, KernelKind kind, Centering centering);

// Evaluate a field off-grid. nearest returns the matrix at the closest grid
// point (ties resolve to the lower point); linear interpolates entrywise
// between the bracketing points. z_query must lie in [0,1].
Matrix interpolate_field(const IndexGrid& grid, const MatStack& matrices, double z_query,
                         InterpMode mode);

}  // namespace ccs
