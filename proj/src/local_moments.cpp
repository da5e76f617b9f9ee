#include "ccs/local_moments.hpp"

#include <algorithm>
#include <cmath>

#include "ccs/kernels.hpp"

namespace ccs {

IndexGrid uniform_grid(int K) {
  if (K < 2) throw ValidationError("uniform_grid: K must be at least 2");
  IndexGrid grid;
  grid.points.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    grid.points[static_cast<std::size_t>(k)] = static_cast<double>(k) / (K - 1);
  grid.points.back() = 1.0;
  return grid;
}

Vector local_mean(const IndexedSample& sample, double z_query, double h, KernelKind kind) {
  sample.validate();
  std::vector<double> w = smoothing_weights(z_query, sample.z, h, kind);
  Vector m = Vector::Zero(sample.p());
  for (int i = 0; i < sample.n(); ++i) m += w[static_cast<std::size_t>(i)] * sample.x.row(i).transpose();
  return m;
}

CovarianceField local_covariance_field(const IndexedSample& sample, const IndexGrid& grid,
                                       double h, KernelKind kind, Centering centering) {
  sample.validate();
  grid.validate();
  int n = sample.n(), p = sample.p();

  // Per-observation centers m_hat(z^i); each z^i is within h of itself, so
  // the weights there are always defined.
  Matrix centers;  // n x p
  if (centering == Centering::per_observation) {
    centers.resize(n, p);
    for (int i = 0; i < n; ++i)
      centers.row(i) = local_mean(sample, sample.z[static_cast<std::size_t>(i)], h, kind).transpose();
  }

  CovarianceField field;
  field.grid = grid;
  field.h = h;
  field.kind = kind;
  field.centering = centering;
  field.matrices.reserve(grid.points.size());

  for (double zk : grid.points) {
    std::vector<double> w;
    try {
      w = smoothing_weights(zk, sample.z, h, kind);
    } catch (const EmptyBandwidthError&) {
      throw EmptyBandwidthError(zk, "local_covariance_field: no sample within bandwidth " +
                                        std::to_string(h) + " of grid point z = " +
                                        std::to_string(zk));
    }
    Vector target_mean;
    if (centering == Centering::at_target) {
      target_mean = Vector::Zero(p);
      for (int i = 0; i < n; ++i) target_mean += w[static_cast<std::size_t>(i)] * sample.x.row(i).transpose();
    }
    Matrix sigma = Matrix::Zero(p, p);
    for (int i = 0; i < n; ++i) {
      double wi = w[static_cast<std::size_t>(i)];
      if (wi == 0.0) continue;
      Vector d = sample.x.row(i).transpose();
      if (centering == Centering::per_observation)
        d -= centers.row(i).transpose();
      else if (centering == Centering::at_target)
        d -= target_mean;
      sigma.noalias() += wi * (d * d.transpose());
    }
    field.matrices.push_back(0.5 * (sigma + sigma.transpose()));
  }
  return field;
}

Matrix interpolate_field(const IndexGrid& grid, const MatStack& matrices, double z_query,
                         InterpMode mode) {
  grid.validate();
  if (matrices.size() != grid.points.size())
    throw DimensionError("interpolate_field: one matrix per grid point required");
  if (z_query < 0.0 || z_query > 1.0)
    throw ValidationError("interpolate_field: z_query must lie in [0,1]");

  const std::vector<double>& pts = grid.points;
  if (z_query <= pts.front()) return matrices.front();
  if (z_query >= pts.back()) return matrices.back();

  // First index with pts[hi] >= z_query; lo = hi - 1 brackets the query.
  int hi = static_cast<int>(std::lower_bound(pts.begin(), pts.end(), z_query) - pts.begin());
  int lo = hi - 1;

  if (mode == InterpMode::nearest) {
    double dlo = z_query - pts[static_cast<std::size_t>(lo)];
    double dhi = pts[static_cast<std::size_t>(hi)] - z_query;
    return dlo <= dhi ? matrices[static_cast<std::size_t>(lo)]
                      : matrices[static_cast<std::size_t>(hi)];
  }
  double t = (z_query - pts[static_cast<std::size_t>(lo)]) /
             (pts[static_cast<std::size_t>(hi)] - pts[static_cast<std::size_t>(lo)]);
  return (1.0 - t) * matrices[static_cast<std::size_t>(lo)] +
         t * matrices[static_cast<std::size_t>(hi)];
}

}  // namespace ccs
