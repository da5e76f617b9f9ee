#pragma once

#include <vector>

#include "ccs/types.hpp"

namespace ccs {

// K(u); symmetric density on [-1,1], zero outside.
double kernel_eval(KernelKind kind, double u);

// integral of K(t)^2 dt, analytic per kernel.
double kernel_l2_norm(KernelKind kind);

// Nadaraya-Watson weights w^i(z) = K_h(z^i - z) / sum_j K_h(z^j - z).
// Throws EmptyBandwidthError when every kernel value is zero.
std::vector<double> smoothing_weights(double z_query, const std::vector<double>& index_points,
                                      double h, KernelKind kind);

// f_hat(z) = (nh)^-1 sum_i K((z^i - z)/h).
double density_estimate(double z_query, const std::vector<double>& index_points, double h,
                        KernelKind kind);

// c_h * n^(-1/5) for estimation, c_h * n^(-1/4) for inference.
double default_bandwidth(int n, double c_h, bool inference);

}  // namespace ccs
