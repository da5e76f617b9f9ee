#pragma once

#include <string>
#include <vector>

#include "ccs/types.hpp"

namespace ccs {

struct IngestOptions {
  std::string z_column = "z";
  bool log_returns = false;   // x_t <- log(x_t / x_(t-1)), first row dropped
  bool standardize = false;   // per column mean 0, variance 1
};

// Reads a headered numeric CSV, pulls the index column by name, applies the
// optional transforms, and rescales z affinely to [0,1].
IndexedSample ingest_csv(const std::string& path, const IngestOptions& options);

// Dispatches the subcommands (simulate, fit, path, ci, cv, bench-solver,
// coverage, scaling). Returns 0 on success, 2 on input or validation errors,
// 3 when a required solve did not converge.
int run_command(const std::vector<std::string>& args);

}  // namespace ccs
