#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ccs/evaluation.hpp"
#include "ccs/inference.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

// FNV-1a over a canonical key=value serialization; identifies a RunConfig.
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

// First line of every output file: tool version, seed, RunConfig hash.
struct OutputHeader {
  std::uint64_t seed = 0;
  std::string config_hash;
};
std::string header_line(const OutputHeader& header);

// Schemas are fixed: omega_grid.csv (z,u,v,value) in lexicographic (z,u,v)
// order with u <= v; support.csv (u,v,group_norm); ci.csv
// (z,u,v,point,lower,upper) with u <= v; pr_curve.csv
// (lambda,precision,recall,f1,hamming); traces.csv
// (solver,iteration,objective,seconds); data csv (z,x1..xp).
void write_omega_grid_csv(const std::string& path, const OutputHeader& header,
                          const PrecisionField& field);
void write_support_csv(const std::string& path, const OutputHeader& header,
                       const PrecisionField& field);
void write_ci_csv(const std::string& path, const OutputHeader& header,
                  const ConfidenceBand& band);
void write_pr_curve_csv(const std::string& path, const OutputHeader& header,
                        const std::vector<PrCurveRow>& rows);
void write_traces_csv(const std::string& path, const OutputHeader& header,
                      const std::vector<std::pair<std::string, SolveReport>>& traces);
void write_dataset_csv(const std::string& path, const OutputHeader& header,
                       const IndexedSample& sample);

// Inverse of write_omega_grid_csv; matrices are reconstructed exactly,
// group norms and support recomputed (support at support_tol).
PrecisionField read_omega_grid_csv(const std::string& path, double support_tol = 1e-4);

}  // namespace ccs
