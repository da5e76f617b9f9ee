#include "ccs/inference.hpp"

#include <cmath>

#include "ccs/kernels.hpp"

namespace ccs {

Matrix debias(const Matrix& omega, const Matrix& sigma) {
  if (omega.rows() != omega.cols() || sigma.rows() != sigma.cols() ||
      omega.rows() != sigma.rows())
    throw DimensionError("debias: omega and sigma must be square with equal size");
  Matrix t = 2.0 * omega - omega * sigma * omega;
  return 0.5 * (t + t.transpose());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("normal_quantile: p must lie in (0,1)");

  // Rational approximation in three regions (Acklam's coefficients),
  // then one Halley refinement against the erfc-based CDF.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= p_high) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * 3.141592653589793238462643383279502884) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

ConfidenceBand confidence_band(const PrecisionField& field, const CovarianceField& cov,
                               const IndexedSample& sample, double alpha, RateMode rate,
                               KernelKind kind, double h) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("confidence_band: alpha must lie in (0,1)");
  if (field.matrices.size() != cov.matrices.size())
    throw DimensionError("confidence_band: field and covariance grids differ");
  sample.validate();

  double n = static_cast<double>(sample.n());
  double rate_exp = rate == RateMode::undersmoothed ? 3.0 / 8.0 : 2.0 / 5.0;
  double quantile = normal_quantile(1.0 - alpha / 2.0);
  double k2 = kernel_l2_norm(kind);

  ConfidenceBand band;
  band.grid = field.grid;
  band.alpha = alpha;
  band.rate = rate;
  std::size_t K = field.matrices.size();
  band.point.reserve(K);
  band.lower.reserve(K);
  band.upper.reserve(K);

  for (std::size_t i = 0; i < K; ++i) {
    double z = field.grid.points[i];
    double fz = density_estimate(z, sample.z, h, kind);
    if (fz <= 0.0)
      throw ValidationError("confidence_band: estimated density vanishes at z = " +
                            std::to_string(z));
    const Matrix& omega = field.matrices[i];
    Matrix point = debias(omega, cov.matrices[i]);
    Eigen::Index p = omega.rows();
    Matrix half(p, p);
    for (Eigen::Index u = 0; u < p; ++u)
      for (Eigen::Index v = 0; v < p; ++v) {
        double variance = (omega(u, v) * omega(u, v) + omega(u, u) * omega(v, v)) / fz * k2;
        half(u, v) = quantile * std::pow(n, -rate_exp) * std::sqrt(variance);
      }
    band.point.push_back(point);
    band.lower.push_back(point - half);
    band.upper.push_back(point + half);
  }
  return band;
}

CoverageSummary coverage_tally(const MatStack& truth, const std::vector<ConfidenceBand>& bands,
                               const EdgeSet& support) {
  if (truth.empty() || bands.empty())
    throw ValidationError("coverage_tally: need truth and at least one band");
  std::size_t K = truth.size();
  Eigen::Index p = truth[0].rows();
  for (const ConfidenceBand& band : bands)
    if (band.point.size() != K || band.point[0].rows() != p)
      throw DimensionError("coverage_tally: band grid does not match truth");

  Matrix cover = Matrix::Zero(p, p);
  Matrix length = Matrix::Zero(p, p);
  for (const ConfidenceBand& band : bands) {
    for (std::size_t i = 0; i < K; ++i) {
      for (Eigen::Index u = 0; u < p; ++u)
        for (Eigen::Index v = 0; v < p; ++v) {
          double t = truth[i](u, v);
          if (t >= band.lower[i](u, v) && t <= band.upper[i](u, v)) cover(u, v) += 1.0;
          length(u, v) += band.upper[i](u, v) - band.lower[i](u, v);
        }
    }
  }
  double denom = static_cast<double>(bands.size()) * static_cast<double>(K);
  cover /= denom;
  length /= denom;

  CoverageSummary out;
  out.per_pair_coverage = cover;
  int n_S = 0, n_Sc = 0;
  for (Eigen::Index u = 0; u < p; ++u)
    for (Eigen::Index v = u + 1; v < p; ++v) {
      if (support.contains(static_cast<int>(u), static_cast<int>(v))) {
        out.avgcov_S += cover(u, v);
        out.avglen_S += length(u, v);
        ++n_S;
      } else {
        out.avgcov_Sc += cover(u, v);
        out.avglen_Sc += length(u, v);
        ++n_Sc;
      }
    }
  if (n_S > 0) {
    out.avgcov_S /= n_S;
    out.avglen_S /= n_S;
  }
  if (n_Sc > 0) {
    out.avgcov_Sc /= n_Sc;
    out.avglen_Sc /= n_Sc;
  }
  return out;
}

}  // namespace ccs
