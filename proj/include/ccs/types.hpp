#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccs/error.hpp"

namespace ccs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One symmetric p x p matrix per grid point; the solver's decision variable.
using MatStack = std::vector<Matrix>;

enum class KernelKind { epanechnikov, boxcar, tricube };
enum class Centering { per_observation, at_target, none };
enum class BetaSchedule { constant, inverse_k };
enum class PenaltyKind { group, l1 };
enum class RateMode { undersmoothed, theorem };
enum class InterpMode { nearest, linear };

std::string to_string(KernelKind k);
std::string to_string(Centering c);
std::string to_string(BetaSchedule s);
std::string to_string(PenaltyKind p);
std::string to_string(RateMode r);
KernelKind kernel_from_string(const std::string& s);
Centering centering_from_string(const std::string& s);
BetaSchedule schedule_from_string(const std::string& s);
RateMode rate_mode_from_string(const std::string& s);

// n observations (z^i, x^i); z rescaled to [0,1] at ingestion.
struct IndexedSample {
  std::vector<double> z;
  Matrix x;  // n x p, row i is x^i

  int n() const { return static_cast<int>(z.size()); }
  int p() const { return static_cast<int>(x.cols()); }
  void validate() const;
};

// Strictly increasing evaluation points in [0,1].
struct IndexGrid {
  std::vector<double> points;

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;
};

struct MeanField {
  IndexGrid grid;
  std::vector<Vector> means;
};

// Kernel-smoothed covariances on a grid, with the smoothing metadata.
struct CovarianceField {
  IndexGrid grid;
  MatStack matrices;
  double h = 0.0;
  KernelKind kind = KernelKind::epanechnikov;
  Centering centering = Centering::per_observation;

  int p() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
};

// Unordered node pairs (u,v), u < v, no self-loops.
struct EdgeSet {
  std::set<std::pair<int, int>> edges;

  void insert(int u, int v);
  bool contains(int u, int v) const;
  int size() const { return static_cast<int>(edges.size()); }
  bool operator==(const EdgeSet& other) const { return edges == other.edges; }
};

// Fitted precision matrices with per-edge quadratic-mean group norms and support.
struct PrecisionField {
  IndexGrid grid;
  MatStack matrices;
  Matrix group_norms;  // p x p, entry (u,v) = sqrt(K^-1 sum_k omega_uv(z_k)^2)
  EdgeSet support;

  int p() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
};

struct SolverConfig {
  double lambda = 0.0;
  double L_f = 0.1;
  double beta = 0.1;
  BetaSchedule schedule = BetaSchedule::constant;
  int max_iter = 2000;
  double rel_tol = 1e-7;
  double support_tol = 1e-4;
  PenaltyKind penalty = PenaltyKind::group;

  void validate() const;
};

struct AdmmConfig {
  double lambda = 0.0;
  double rho = 1.0;
  int max_iter = 2000;
  double tol = 1e-6;
  PenaltyKind penalty = PenaltyKind::group;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> objective_trace;  // objective at every Theta iterate
  std::vector<double> time_trace;       // seconds elapsed at each trace entry
  bool converged = false;
  double final_objective = 0.0;
  double wall_time = 0.0;
};

struct FitResult {
  PrecisionField field;
  SolveReport report;
};

}  // namespace ccs
