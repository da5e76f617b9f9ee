#include "ccs/synthetic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ccs/rng.hpp"

namespace ccs {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;
constexpr int kWalkSteps = 10000;
constexpr int kSplineKnots = 21;

GraphSpec chain_graph(int p, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  GraphSpec g;
  g.p = p;
  g.kind = GraphKind::chain;
  for (int i = 0; i + 1 < p; ++i)
    g.edges.insert(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]);
  return g;
}

GraphSpec nearest_neighbor_graph(int p, Rng& rng) {
  std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(p));
  for (auto& pt : pts) {
    pt.first = rng.uniform();
    pt.second = rng.uniform();
  }
  GraphSpec g;
  g.p = p;
  g.kind = GraphKind::nearest_neighbor;
  for (int u = 0; u < p; ++u) {
    // Two nearest by squared distance; ties resolve to the lower index.
    std::vector<std::pair<double, int>> d;
    d.reserve(static_cast<std::size_t>(p) - 1);
    for (int v = 0; v < p; ++v) {
      if (v == u) continue;
      double dx = pts[static_cast<std::size_t>(u)].first - pts[static_cast<std::size_t>(v)].first;
      double dy =
          pts[static_cast<std::size_t>(u)].second - pts[static_cast<std::size_t>(v)].second;
      d.emplace_back(dx * dx + dy * dy, v);
    }
    std::sort(d.begin(), d.end());
    g.edges.insert(u, d[0].second);
    g.edges.insert(u, d[1].second);
  }
  return g;
}

GraphSpec erdos_renyi_graph(int p, Rng& rng) {
  const int target = 2 * p;
  const int cap = 5;
  GraphSpec g;
  g.p = p;
  g.kind = GraphKind::erdos_renyi;
  while (true) {
    EdgeSet edges;
    std::vector<int> degree(static_cast<std::size_t>(p), 0);
    int placed = 0;
    // Uniform proposals with rejection; a dead end (no legal pair left)
    // restarts the whole draw.
    bool dead = false;
    while (placed < target && !dead) {
      int legal = 0;
      for (int u = 0; u < p && legal == 0; ++u)
        for (int v = u + 1; v < p; ++v)
          if (!edges.contains(u, v) && degree[static_cast<std::size_t>(u)] < cap &&
              degree[static_cast<std::size_t>(v)] < cap) {
            legal = 1;
            break;
          }
      if (legal == 0) {
        dead = true;
        break;
      }
      int u = rng.uniform_index(p);
      int v = rng.uniform_index(p);
      if (u == v || edges.contains(u, v)) continue;
      if (degree[static_cast<std::size_t>(u)] >= cap || degree[static_cast<std::size_t>(v)] >= cap)
        continue;
      edges.insert(u, v);
      ++degree[static_cast<std::size_t>(u)];
      ++degree[static_cast<std::size_t>(v)];
      ++placed;
    }
    if (!dead && placed == target) {
      g.edges = edges;
      return g;
    }
  }
}

GraphSpec scale_free_graph(int p, Rng& rng) {
  GraphSpec g;
  g.p = p;
  g.kind = GraphKind::scale_free;
  std::vector<int> degree(static_cast<std::size_t>(p), 0);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) {
      g.edges.insert(u, v);
      ++degree[static_cast<std::size_t>(u)];
      ++degree[static_cast<std::size_t>(v)];
    }
  for (int node = 5; node < p; ++node) {
    int total = 0;
    for (int v = 0; v < node; ++v) total += degree[static_cast<std::size_t>(v)];
    double r = rng.uniform() * total;
    int pick = 0;
    double acc = 0.0;
    for (int v = 0; v < node; ++v) {
      acc += degree[static_cast<std::size_t>(v)];
      if (r < acc) {
        pick = v;
        break;
      }
    }
    g.edges.insert(node, pick);
    ++degree[static_cast<std::size_t>(node)];
    ++degree[static_cast<std::size_t>(pick)];
  }
  return g;
}

int max_degree_of(const EdgeSet& edges, int p) {
  std::vector<int> degree(static_cast<std::size_t>(p), 0);
  for (const auto& e : edges.edges) {
    ++degree[static_cast<std::size_t>(e.first)];
    ++degree[static_cast<std::size_t>(e.second)];
  }
  int d = 0;
  for (int v : degree) d = std::max(d, v);
  return d;
}

}  // namespace

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::chain: return "chain";
    case GraphKind::nearest_neighbor: return "nearest_neighbor";
    case GraphKind::erdos_renyi: return "erdos_renyi";
    case GraphKind::scale_free: return "scale_free";
  }
  return "?";
}

std::string to_string(PathKind k) {
  switch (k) {
    case PathKind::random_walk: return "random_walk";
    case PathKind::linear: return "linear";
    case PathKind::sine: return "sin";
  }
  return "?";
}

GraphKind graph_from_string(const std::string& s) {
  if (s == "chain") return GraphKind::chain;
  if (s == "nearest_neighbor" || s == "nn") return GraphKind::nearest_neighbor;
  if (s == "erdos_renyi" || s == "er") return GraphKind::erdos_renyi;
  if (s == "scale_free") return GraphKind::scale_free;
  throw ValidationError("unknown graph kind: " + s);
}

PathKind path_from_string(const std::string& s) {
  if (s == "random_walk") return PathKind::random_walk;
  if (s == "linear") return PathKind::linear;
  if (s == "sin") return PathKind::sine;
  throw ValidationError("unknown path kind: " + s);
}

GraphSpec generate_graph(GraphKind kind, int p, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, 0x67726170));  // graph stream
  GraphSpec g;
  switch (kind) {
    case GraphKind::chain:
      if (p < 2) throw ValidationError("chain graph: p must be at least 2");
      g = chain_graph(p, rng);
      break;
    case GraphKind::nearest_neighbor:
      if (p < 3) throw ValidationError("nearest neighbor graph: p must be at least 3");
      g = nearest_neighbor_graph(p, rng);
      break;
    case GraphKind::erdos_renyi:
      // 2p edges under a degree cap of 5 are infeasible below p = 5.
      if (p < 5) throw ValidationError("erdos renyi graph: p must be at least 5");
      g = erdos_renyi_graph(p, rng);
      break;
    case GraphKind::scale_free:
      if (p < 6) throw ValidationError("scale free graph: p must be at least 6");
      g = scale_free_graph(p, rng);
      break;
  }
  g.max_degree = max_degree_of(g.edges, p);
  return g;
}

NaturalSpline::NaturalSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) throw ValidationError("spline: need matching knots, at least 2");
  m2_.assign(n, 0.0);
  if (n == 2) return;

  // Tridiagonal system for interior second derivatives; natural ends m2 = 0.
  std::size_t interior = n - 2;
  std::vector<double> a(interior), b(interior), c(interior), d(interior);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = xs_[i] - xs_[i - 1];
    double h1 = xs_[i + 1] - xs_[i];
    a[i - 1] = h0;
    b[i - 1] = 2.0 * (h0 + h1);
    c[i - 1] = h1;
    d[i - 1] = 6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
  }
  for (std::size_t i = 1; i < interior; ++i) {
    double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<double> sol(interior);
  sol[interior - 1] = d[interior - 1] / b[interior - 1];
  for (std::size_t i = interior - 1; i-- > 0;) sol[i] = (d[i] - c[i] * sol[i + 1]) / b[i];
  for (std::size_t i = 0; i < interior; ++i) m2_[i + 1] = sol[i];
}

double NaturalSpline::eval(double x) const {
  std::size_t n = xs_.size();
  if (x <= xs_.front()) x = xs_.front();
  if (x >= xs_.back()) x = xs_.back();
  std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  if (hi == 0) hi = 1;
  if (hi >= n) hi = n - 1;
  std::size_t lo = hi - 1;
  double h = xs_[hi] - xs_[lo];
  double t0 = (xs_[hi] - x) / h;
  double t1 = (x - xs_[lo]) / h;
  return t0 * ys_[lo] + t1 * ys_[hi] +
         ((t0 * t0 * t0 - t0) * m2_[lo] + (t1 * t1 * t1 - t1) * m2_[hi]) * h * h / 6.0;
}

PrecisionPath::PrecisionPath(const ScenarioSpec& scenario)
    : kind_(scenario.path), pd_floor_(scenario.pd_floor) {
  if (scenario.pd_floor < 0.0) throw ValidationError("scenario: pd_floor must be non-negative");
  graph_ = generate_graph(scenario.graph_kind, scenario.p, scenario.seed);
  Rng rng(Rng::derive(scenario.seed, 0x70617468));  // path stream

  std::size_t m = graph_.edges.edges.size();
  if (kind_ == PathKind::linear || kind_ == PathKind::sine) {
    offsets_.reserve(m);
    for (std::size_t e = 0; e < m; ++e) offsets_.push_back(rng.uniform());
    return;
  }

  // Random walk: start in [-0.3,-0.2] or [0.2,0.3] with equal probability,
  // then 10^4 steps of exactly +-0.002; the spline interpolates the walk at
  // 21 equally spaced knots.
  splines_.reserve(m);
  walk_knots_.reserve(m);
  std::vector<double> knot_x(kSplineKnots);
  int stride = kWalkSteps / (kSplineKnots - 1);
  for (int j = 0; j < kSplineKnots; ++j)
    knot_x[static_cast<std::size_t>(j)] =
        static_cast<double>(j * stride) / static_cast<double>(kWalkSteps);

  for (std::size_t e = 0; e < m; ++e) {
    double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    double value = sign * rng.uniform(0.2, 0.3);
    std::vector<double> knot_y(kSplineKnots);
    knot_y[0] = value;
    int next_knot = 1;
    for (int t = 1; t <= kWalkSteps; ++t) {
      double step = rng.uniform() < 0.5 ? 0.002 : -0.002;
      value += step;
      if (t == next_knot * stride) {
        knot_y[static_cast<std::size_t>(next_knot)] = value;
        ++next_knot;
      }
    }
    walk_knots_.push_back(knot_y);
    splines_.emplace_back(knot_x, knot_y);
  }
}

double PrecisionPath::edge_value(std::size_t edge_index, double z) const {
  switch (kind_) {
    case PathKind::linear:
      return 2.0 * z - offsets_[edge_index];
    case PathKind::sine:
      return std::sin(kTwoPi * z + offsets_[edge_index]);
    case PathKind::random_walk:
      return splines_[edge_index].eval(z);
  }
  return 0.0;
}

Matrix PrecisionPath::omega_raw(double z) const {
  int p = graph_.p;
  Matrix m = Matrix::Zero(p, p);
  std::size_t e = 0;
  for (const auto& edge : graph_.edges.edges) {
    double v = edge_value(e, z);
    m(edge.first, edge.second) = v;
    m(edge.second, edge.first) = v;
    ++e;
  }
  return m;
}

Matrix PrecisionPath::omega(double z) const { return enforce_pd(omega_raw(z), pd_floor_); }

MatStack PrecisionPath::on_grid(const IndexGrid& grid) const {
  grid.validate();
  MatStack out;
  out.reserve(grid.points.size());
  for (double z : grid.points) out.push_back(omega(z));
  return out;
}

MatStack generate_precision_field(const GraphSpec& graph, PathKind path, const IndexGrid& grid,
                                  std::uint64_t seed) {
  ScenarioSpec scenario;
  scenario.graph_kind = graph.kind;
  scenario.p = graph.p;
  scenario.path = path;
  scenario.seed = seed;
  PrecisionPath pp(scenario);
  return pp.on_grid(grid);
}

Matrix enforce_pd(const Matrix& m, double floor) {
  if (m.rows() != m.cols()) throw DimensionError("enforce_pd: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  double lam_min = eig.eigenvalues().minCoeff();
  double delta = std::max(0.0, floor - lam_min);
  if (delta == 0.0) return m;
  return m + delta * Matrix::Identity(m.rows(), m.cols());
}

MatStack enforce_pd(const MatStack& stack, double floor) {
  MatStack out;
  out.reserve(stack.size());
  for (const Matrix& m : stack) out.push_back(enforce_pd(m, floor));
  return out;
}

std::pair<IndexedSample, MatStack> sample_dataset(const ScenarioSpec& scenario, int n,
                                                  const IndexGrid& grid,
                                                  std::uint64_t sampling_seed) {
  if (n < 1) throw ValidationError("sample_dataset: n must be at least 1");
  PrecisionPath path(scenario);
  Rng rng(Rng::derive(sampling_seed, 0x64617461));  // data stream

  int p = scenario.p;
  IndexedSample sample;
  sample.z.resize(static_cast<std::size_t>(n));
  for (double& z : sample.z) z = rng.uniform();
  sample.x.resize(n, p);

  for (int i = 0; i < n; ++i) {
    Matrix omega = path.omega(sample.z[static_cast<std::size_t>(i)]);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(omega);
    // Sigma^(1/2) = Q diag(eigenvalue^-1/2) Q^T; the PD floor keeps
    // eigenvalues away from zero.
    Vector inv_sqrt = eig.eigenvalues().array().sqrt().inverse();
    Matrix root = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
    Vector g(p);
    for (int j = 0; j < p; ++j) g(j) = rng.normal();
    sample.x.row(i) = (root * g).transpose();
  }
  return {std::move(sample), path.on_grid(grid)};
}

}  // namespace ccs
