#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ccs/types.hpp"

namespace ccs {

enum class GraphKind { chain, nearest_neighbor, erdos_renyi, scale_free };
enum class PathKind { random_walk, linear, sine };

std::string to_string(GraphKind k);
std::string to_string(PathKind k);
GraphKind graph_from_string(const std::string& s);
PathKind path_from_string(const std::string& s);

struct GraphSpec {
  int p = 0;
  EdgeSet edges;
  GraphKind kind = GraphKind::chain;
  int max_degree = 0;
};

// chain: random node permutation connected in succession (p-1 edges).
// nearest_neighbor: union of each node's 2 nearest neighbors among uniform
// points in the unit square. erdos_renyi: 2p uniform edges with a degree cap
// of 5, restarting when no legal edge remains. scale_free: 5-clique plus one
// preferential-attachment edge per added node.
GraphSpec generate_graph(GraphKind kind, int p, std::uint64_t seed);

struct ScenarioSpec {
  GraphKind graph_kind = GraphKind::chain;
  int p = 0;
  PathKind path = PathKind::sine;
  double pd_floor = 0.5;
  std::uint64_t seed = 0;
};

// Natural cubic interpolating spline through fixed knots.
class NaturalSpline {
 public:
  NaturalSpline() = default;
  NaturalSpline(std::vector<double> xs, std::vector<double> ys);
  double eval(double x) const;

 private:
  std::vector<double> xs_, ys_, m2_;  // m2_ holds second derivatives at knots
};

// Ground-truth precision path Omega*(z). The graph and the per-edge path
// parameters are drawn once from the scenario seed; evaluation at any z is
// then deterministic. random_walk edges follow a +-0.002 step walk over
// 10^4 steps, smoothed by a natural cubic spline through 21 equally spaced
// knots; linear edges are 2z - c_uv; sine edges are sin(2 pi z + c_uv), with
// c_uv ~ Uniform[0,1]. Diagonals start at zero and the PD floor is applied
// pointwise.
class PrecisionPath {
 public:
  explicit PrecisionPath(const ScenarioSpec& scenario);

  const GraphSpec& graph() const { return graph_; }
  double edge_value(std::size_t edge_index, double z) const;  // pre-floor path value
  Matrix omega_raw(double z) const;  // off-support zero, diagonal zero, no floor
  Matrix omega(double z) const;      // with the PD floor applied
  MatStack on_grid(const IndexGrid& grid) const;

  // Raw pre-spline walk values at the 21 spline knots, for inspection.
  const std::vector<std::vector<double>>& walk_knots() const { return walk_knots_; }

 private:
  GraphSpec graph_;
  PathKind kind_ = PathKind::sine;
  double pd_floor_ = 0.5;
  std::vector<double> offsets_;
  std::vector<NaturalSpline> splines_;
  std::vector<std::vector<double>> walk_knots_;
};

// Per grid point: path values on the support, zero elsewhere, zero initial
// diagonal, then enforce_pd.
MatStack generate_precision_field(const GraphSpec& graph, PathKind path, const IndexGrid& grid,
                                  std::uint64_t seed);

// Adds delta(z) I with delta(z) = max(0, floor - lambda_min) per matrix.
Matrix enforce_pd(const Matrix& m, double floor);
MatStack enforce_pd(const MatStack& stack, double floor);

// z^i ~ Uniform[0,1], x^i | z^i ~ N(0, Omega*(z^i)^-1) via the symmetric
// eigendecomposition square root. Path parameters come from scenario.seed;
// the data stream comes from sampling_seed. Also returns Omega* on the
// requested grid for metric computation.
std::pair<IndexedSample, MatStack> sample_dataset(const ScenarioSpec& scenario, int n,
                                                  const IndexGrid& grid,
                                                  std::uint64_t sampling_seed);

}  // namespace ccs
