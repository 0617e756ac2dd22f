#pragma once

#include <functional>

#include "rvm/diagnostics.hpp"
#include "rvm/distribution.hpp"
#include "rvm/field.hpp"
#include "rvm/grid.hpp"
#include "rvm/vlasov.hpp"

namespace rvm {

// Complete reduced history of a run: field states, moments, and the scalar
// series needed by the closed-form field representation, the cone estimate,
// and the energy balance.  The full distribution is kept only at the ends;
// per-step access during a run goes through the observer callback.
struct SimulationRun {
  SimConfig cfg;
  PhaseSpaceGrid grid;
  VelocityTables tables{PhaseSpaceGrid(8, 4, 1.0)};
  TheoreticalConstants constants;

  std::vector<FieldState> field_states;        // levels 0..n_steps
  std::vector<CurrentSlice> current_history;   // aligned
  std::vector<std::vector<double>> q_history;  // |vhat2|-moment per level
  std::vector<double> kinetic_energy;          // int int lorentz f per level
  std::vector<double> total_energy;            // int e dx per level
  std::vector<double> flux_accum;              // int_0^t [E2B(0)-E2B(1)] dtau
  std::vector<DiagnosticsReport> diagnostics;  // aligned

  DistributionState f_initial, f_final;
  std::vector<double> picard_residuals;  // picard mode only

  int n_steps() const { return int(field_states.size()) - 1; }
  double max_f0_grid = 0.0;  // grid max of f at t=0 (exact bound for max f)
};

// Called after every completed level with the distribution at that level.
using StepObserver =
    std::function<void(const SimulationRun&, const DistributionState&, int)>;

// Predictor-corrector time marching; throws ViolationError at the first
// step whose diagnostics report a violated bound (after invoking the
// observer for that step).
SimulationRun run_time_marching(const SimConfig& cfg,
                                const StepObserver& observer = {});

namespace detail {
// Appends level data (fields+moments already pushed) derived series and the
// diagnostics report for level m; shared by the two solver drivers.
void finalize_level(SimulationRun& run, const DistributionState& f, int m);
}  // namespace detail

}  // namespace rvm
