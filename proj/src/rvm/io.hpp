#pragma once

#include <string>
#include <vector>

#include "rvm/driver.hpp"
#include "rvm/errors.hpp"

namespace rvm {

// Captures distribution snapshots through the driver observer at the output
// stride (step 0 and the final step are always kept).
struct RunRecorder {
  int stride = 1;
  int final_step = 0;

  std::vector<int> steps;
  std::vector<DistributionState> f_snaps;

  StepObserver observer();
};

// Writes the complete artifact set for a finished run into dir: manifest
// (config echo + hash, constants, inventory), diagnostics/violations series,
// per-snapshot field tables and raw distribution dumps, and optionally the
// seeded trajectory table.  Returns the file names written.
std::vector<std::string> write_run_artifacts(const SimulationRun& run,
                                             const RunRecorder& rec,
                                             const std::string& dir);

// Minimal record for a run aborted by a diagnostic violation.
void write_failure_artifacts(const SimConfig& cfg, const ViolationError& err,
                             const std::string& dir);

// Offline re-verification of a run directory from the files alone:
// inventory sizes and binary checksums, then every recomputable diagnostic
// at each stored snapshot.  Ok when everything matches; CheckFailure when a
// stored value disagrees with recomputation; IoError when an artifact is
// missing or corrupt.  message carries the verdict detail.
StatusCode check_run_directory(const std::string& dir, std::string& message);

// 17-significant-digit float formatting shared by all text artifacts.
std::string fmt17(double v);

// FNV-1a 64-bit checksum rendered as 16 hex digits.
std::string fnv1a64_hex(const void* data, size_t n);

}  // namespace rvm
