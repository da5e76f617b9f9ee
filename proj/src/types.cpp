#include "ccs/types.hpp"

#include <cmath>

namespace ccs {

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::epanechnikov: return "epanechnikov";
    case KernelKind::boxcar: return "boxcar";
    case KernelKind::tricube: return "tricube";
  }
  return "?";
}

std::string to_string(Centering c) {
  switch (c) {
    case Centering::per_observation: return "per_observation";
    case Centering::at_target: return "at_target";
    case Centering::none: return "none";
  }
  return "?";
}

std::string to_string(BetaSchedule s) {
  return s == BetaSchedule::constant ? "constant" : "inverse_k";
}

std::string to_string(PenaltyKind p) { return p == PenaltyKind::group ? "group" : "l1"; }

std::string to_string(RateMode r) {
  return r == RateMode::undersmoothed ? "undersmoothed" : "theorem";
}

KernelKind kernel_from_string(const std::string& s) {
  if (s == "epanechnikov") return KernelKind::epanechnikov;
  if (s == "boxcar") return KernelKind::boxcar;
  if (s == "tricube") return KernelKind::tricube;
  throw ValidationError("unknown kernel: " + s);
}

Centering centering_from_string(const std::string& s) {
  if (s == "per_observation") return Centering::per_observation;
  if (s == "at_target") return Centering::at_target;
  if (s == "none") return Centering::none;
  throw ValidationError("unknown centering mode: " + s);
}

BetaSchedule schedule_from_string(const std::string& s) {
  if (s == "constant") return BetaSchedule::constant;
  if (s == "inverse_k") return BetaSchedule::inverse_k;
  throw ValidationError("unknown beta schedule: " + s);
}

RateMode rate_mode_from_string(const std::string& s) {
  if (s == "undersmoothed") return RateMode::undersmoothed;
  if (s == "theorem") return RateMode::theorem;
  throw ValidationError("unknown rate mode: " + s);
}

void IndexedSample::validate() const {
  if (z.empty()) throw ValidationError("sample: n must be at least 1");
  if (x.rows() != static_cast<Eigen::Index>(z.size()))
    throw DimensionError("sample: x rows must match z length");
  if (x.cols() < 1) throw ValidationError("sample: p must be at least 1");
  for (double zi : z)
    if (!std::isfinite(zi)) throw ValidationError("sample: non-finite z entry");
  if (!x.allFinite()) throw ValidationError("sample: non-finite x entry");
}

void IndexGrid::validate() const {
  if (points.empty()) throw ValidationError("grid: must be non-empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 0.0 || points[i] > 1.0)
      throw ValidationError("grid: points must lie in [0,1]");
    if (i > 0 && points[i] <= points[i - 1])
      throw ValidationError("grid: points must be strictly increasing");
  }
}

void EdgeSet::insert(int u, int v) {
  if (u == v) throw ValidationError("edge set: self-loop");
  if (u > v) std::swap(u, v);
  edges.emplace(u, v);
}

bool EdgeSet::contains(int u, int v) const {
  if (u > v) std::swap(u, v);
  return edges.count({u, v}) > 0;
}

void SolverConfig::validate() const {
  if (lambda < 0.0) throw ValidationError("solver: lambda must be non-negative");
  if (!(L_f > 0.0)) throw ValidationError("solver: L_f must be positive");
  if (!(beta > 0.0)) throw ValidationError("solver: beta must be positive");
  if (max_iter < 1) throw ValidationError("solver: max_iter must be positive");
  if (!(rel_tol > 0.0)) throw ValidationError("solver: rel_tol must be positive");
  if (support_tol < 0.0) throw ValidationError("solver: support_tol must be non-negative");
}

void AdmmConfig::validate() const {
  if (lambda < 0.0) throw ValidationError("admm: lambda must be non-negative");
  if (!(rho > 0.0)) throw ValidationError("admm: rho must be positive");
  if (max_iter < 1) throw ValidationError("admm: max_iter must be positive");
  if (!(tol > 0.0)) throw ValidationError("admm: tol must be positive");
}

}  // namespace ccs
