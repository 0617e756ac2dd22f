#include "rvm/driver.hpp"

#include <cmath>
#include <sstream>

#include "rvm/errors.hpp"
#include "rvm/sampler.hpp"

namespace rvm {

namespace detail {

void finalize_level(SimulationRun& run, const DistributionState& f, int m) {
  const PhaseSpaceGrid& g = run.grid;
  const VelocityTables& vt = run.tables;

  int nvn = g.n_vnodes();
  std::vector<double> absv2(size_t(nvn) * nvn);
  for (size_t id = 0; id < absv2.size(); ++id)
    absv2[id] = std::abs(vt.vhat2[id]);
  run.q_history.push_back(weighted_moment(f, g, vt, absv2));

  std::vector<double> kin = weighted_moment(f, g, vt, vt.lorentz);
  run.kinetic_energy.push_back(integrate_x(kin, g.dx));

  const FieldState& fs = run.field_states[m];
  std::vector<double> e(g.nx + 1);
  for (int i = 0; i <= g.nx; ++i) {
    double e1 = fs.e1[i], e2 = fs.e2(i), b = fs.b(i);
    e[i] = 0.5 * (e1 * e1 + e2 * e2 + b * b) + kin[i];
  }
  run.total_energy.push_back(integrate_x(e, g.dx));

  if (m == 0) {
    run.flux_accum.push_back(0.0);
  } else {
    auto wall = [&](int lev) {
      const FieldState& s = run.field_states[lev];
      return s.e2(0) * s.b(0) - s.e2(s.nx()) * s.b(s.nx());
    };
    run.flux_accum.push_back(run.flux_accum[m - 1] +
                             0.5 * g.dt() * (wall(m - 1) + wall(m)));
  }

  run.diagnostics.push_back(check_all(run, m, f));
}

}  // namespace detail

SimulationRun run_time_marching(const SimConfig& cfg,
                                const StepObserver& observer) {
  validate_config(cfg);
  if (cfg.solver_mode != SolverMode::March)
    throw ConfigError("run_time_marching requires solver_mode=march");

  SimulationRun run;
  run.cfg = cfg;
  run.grid = PhaseSpaceGrid(cfg.nx, cfg.nv, cfg.v_max);
  run.tables = VelocityTables(run.grid);
  run.constants = theoretical_constants(cfg);

  const PhaseSpaceGrid& g = run.grid;
  const VelocityTables& vt = run.tables;
  double dt = g.dt();
  int n_steps = cfg.n_steps();

  DistributionState f = initial_distribution(cfg, g);
  run.max_f0_grid = f.max_value;
  run.f_initial = f;

  CurrentSlice slice0 = moments(f, g, vt);
  FieldState fs0 = initial_field_state(cfg);
  fs0.e1 = compute_e1(slice0.rho, cfg.lambda, g.dx);
  run.field_states.push_back(std::move(fs0));
  run.current_history.push_back(std::move(slice0));
  detail::finalize_level(run, f, 0);
  if (observer) observer(run, f, 0);
  if (!run.diagnostics[0].violations.empty()) {
    std::ostringstream os;
    os << "diagnostic violation at step 0:";
    for (auto& v : run.diagnostics[0].violations) os << " " << v.first;
    throw ViolationError(os.str(), 0, run.diagnostics[0].violations);
  }

  for (int m = 1; m <= n_steps; ++m) {
    const FieldState& prev = run.field_states[m - 1];
    const CurrentSlice& slice_prev = run.current_history[m - 1];

    // predictor: transport through fields frozen at the old time level
    std::vector<FieldState> frozen{prev};
    FieldSampler s_frozen(frozen, cfg.potential, dt);
    DistributionState f_star = advance_f(f, s_frozen, g);
    CurrentSlice slice_star = moments(f_star, g, vt);
    FieldState pred = step_fields(prev, slice_prev, slice_star,
                                  cfg.boundary_data, cfg.lambda, cfg.t_final);

    // corrector: re-transport through time-interpolated fields, then
    // re-march the field on the corrected moments so stored histories are
    // self-consistent.
    std::vector<FieldState> pair_lv{prev, std::move(pred)};
    FieldSampler s_pair(pair_lv, cfg.potential, dt);
    DistributionState f_next = advance_f(f, s_pair, g);
    CurrentSlice slice_next = moments(f_next, g, vt);
    FieldState next = step_fields(prev, slice_prev, slice_next,
                                  cfg.boundary_data, cfg.lambda, cfg.t_final);

    run.field_states.push_back(std::move(next));
    run.current_history.push_back(std::move(slice_next));
    f = std::move(f_next);

    detail::finalize_level(run, f, m);
    if (observer) observer(run, f, m);
    if (!run.diagnostics[m].violations.empty()) {
      std::ostringstream os;
      os << "diagnostic violation at step " << m << ":";
      for (auto& v : run.diagnostics[m].violations) os << " " << v.first;
      throw ViolationError(os.str(), m, run.diagnostics[m].violations);
    }
  }
  run.f_final = std::move(f);
  return run;
}

}  // namespace rvm
