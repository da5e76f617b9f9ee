#include "ccs/kernels.hpp"

#include <cmath>

#include "ccs/error.hpp"

namespace ccs {

double kernel_eval(KernelKind kind, double u) {
  double a = std::abs(u);
  if (a > 1.0) return 0.0;
  switch (kind) {
    case KernelKind::epanechnikov:
      return 0.75 * (1.0 - u * u);
    case KernelKind::boxcar:
      return 0.5;
    case KernelKind::tricube: {
      double t = 1.0 - a * a * a;
      return (70.0 / 81.0) * t * t * t;
    }
  }
  return 0.0;
}

double kernel_l2_norm(KernelKind kind) {
  switch (kind) {
    case KernelKind::epanechnikov:
      return 0.6;  // 2 * (3/4)^2 * (1 - 2/3 + 1/5)
    case KernelKind::boxcar:
      return 0.5;
    case KernelKind::tricube: {
      // 2 * (70/81)^2 * integral_0^1 (1-u^3)^6 du, binomial expansion term by term.
      double integral = 1.0 - 6.0 / 4.0 + 15.0 / 7.0 - 20.0 / 10.0 + 15.0 / 13.0 -
                        6.0 / 16.0 + 1.0 / 19.0;
      return 2.0 * (70.0 / 81.0) * (70.0 / 81.0) * integral;
    }
  }
  return 0.0;
}

std::vector<double> smoothing_weights(double z_query, const std::vector<double>& index_points,
                                      double h, KernelKind kind) {
  if (index_points.empty()) throw ValidationError("smoothing_weights: empty index_points");
  if (!(h > 0.0)) throw ValidationError("smoothing_weights: bandwidth must be positive");
  std::vector<double> w(index_points.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < index_points.size(); ++i) {
    w[i] = kernel_eval(kind, (index_points[i] - z_query) / h) / h;
    sum += w[i];
  }
  if (sum <= 0.0) {
    throw EmptyBandwidthError(z_query, "smoothing_weights: no sample within bandwidth " +
                                           std::to_string(h) + " of z = " +
                                           std::to_string(z_query));
  }
  for (double& wi : w) wi /= sum;
  return w;
}

double density_estimate(double z_query, const std::vector<double>& index_points, double h,
                        KernelKind kind) {
  if (index_points.empty()) throw ValidationError("density_estimate: empty index_points");
  if (!(h > 0.0)) throw ValidationError("density_estimate: bandwidth must be positive");
  double sum = 0.0;
  for (double zi : index_points) sum += kernel_eval(kind, (zi - z_query) / h);
  return sum / (static_cast<double>(index_points.size()) * h);
}

double default_bandwidth(int n, double c_h, bool inference) {
  if (n < 1) throw ValidationError("default_bandwidth: n must be positive");
  if (!(c_h > 0.0)) throw ValidationError("default_bandwidth: c_h must be positive");
  double exponent = inference ? -0.25 : -0.2;
  return c_h * std::pow(static_cast<double>(n), exponent);
}

}  // namespace ccs
