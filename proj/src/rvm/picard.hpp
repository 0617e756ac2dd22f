#pragma once

#include "rvm/driver.hpp"

namespace rvm {

// Global fixed-point solver.  Iterate 0 freezes the initial data in time;
// each update transports f0 along backward characteristics of the previous
// iterate's fields to every stored level and rebuilds (E1, E2, B) from the
// moment quadrature and the closed-form transverse representation.  The
// residual is the max sup-norm change of (f, E1, E2, B) over all levels;
// iteration stops at picard_tol or throws NonConvergenceError at
// picard_max_iter.  The returned run carries the same level-by-level
// histories and diagnostics as the time-marching driver.
SimulationRun run_picard(const SimConfig& cfg,
                         const StepObserver& observer = {});

}  // namespace rvm
