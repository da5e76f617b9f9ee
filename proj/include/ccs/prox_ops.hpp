#pragma once

#include "ccs/types.hpp"

namespace ccs {

// Raw group norms g_uv = sqrt(sum_k A_uv(z_k)^2). This is the norm the
// penalty, the proximal operators, and the screening bound use.
Matrix group_norms_raw(const MatStack& stack);

// Block soft-thresholding across grid points: every off-diagonal entry (u,v)
// scaled by (1 - t/g_uv)_+ with g_uv the raw group norm; exact zeros across
// the whole stack once g_uv <= t. Diagonals pass through.
MatStack group_prox(const MatStack& stack, double t);

// Elementwise soft-thresholding per grid point; diagonals pass through.
MatStack soft_threshold_prox(const MatStack& stack, double t);

// argmin_Omega L/2 ||Omega - A||_F^2 - log det Omega. Eigen-decompose L*A,
// map eigenvalues through omega_i = (lambda_i + sqrt(lambda_i^2 + 4L))/(2L).
// Output is PD and satisfies L*Omega - Omega^-1 = L*A.
Matrix logdet_prox(const Matrix& A, double L);

// Gradient of the beta-Moreau envelope of the group penalty:
// (stack - group_prox(stack, lambda*beta)) / beta.
MatStack moreau_gradient(const MatStack& stack, double lambda, double beta);

}  // namespace ccs
