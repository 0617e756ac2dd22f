#include "rvm/picard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rvm/characteristics.hpp"
#include "rvm/errors.hpp"
#include "rvm/sampler.hpp"

namespace rvm {

namespace {

// Nodal field rows at every multiple of dt/8 in [0, t_final], built once per
// iterate from the previous iterate's stored levels.  A backward trace from
// a stored level with substep dt/4 has all its RK4 stage times on this
// ladder, so a stage evaluation is one row lookup plus the sampler's x lerp.
struct LadderCache {
  int nx = 0;
  int n_rows = 0;
  double dx = 0.0, dt8 = 0.0;
  std::vector<double> e1, e2, b;  // n_rows*(nx+1), row-major

  LadderCache(const std::vector<FieldState>& levels,
              const ExternalPotential& pot, double dt) {
    FieldSampler fields(levels, pot, dt);
    nx = fields.nx;
    dx = fields.dx;
    dt8 = dt / 8.0;
    n_rows = 8 * (int(levels.size()) - 1) + 1;
    e1.resize(size_t(n_rows) * (nx + 1));
    e2.resize(size_t(n_rows) * (nx + 1));
    b.resize(size_t(n_rows) * (nx + 1));
    for (int r = 0; r < n_rows; ++r) {
      double s = r * dt8;
      for (int i = 0; i <= nx; ++i) {
        size_t id = size_t(r) * (nx + 1) + i;
        fields.blend_nodes(s, i, e1[id], e2[id], b[id]);
      }
    }
  }

  void sample(double s, double y, double& E1, double& E2, double& B) const {
    int r = int(std::lround(s / dt8));
    if (r < 0) r = 0;
    if (r > n_rows - 1) r = n_rows - 1;
    double a = y / dx;
    int i = int(std::floor(a));
    if (i < 0) i = 0;
    if (i > nx - 1) i = nx - 1;
    double w = a - i;
    if (w < 0.0) w = 0.0;
    if (w > 1.0) w = 1.0;
    size_t id = size_t(r) * (nx + 1) + i;
    E1 = (1.0 - w) * e1[id] + w * e1[id + 1];
    E2 = (1.0 - w) * e2[id] + w * e2[id + 1];
    B = (1.0 - w) * b[id] + w * b[id + 1];
  }
};

struct LadderRhs {
  const LadderCache* cache;
  const ExternalPotential* pot;

  Deriv operator()(double s, const PhasePoint& p) const {
    double e1, e2, b;
    cache->sample(s, p.x, e1, e2, b);
    double b_ext = pot->b_ext(p.x);
    return force_eval(e1, e2, b, b_ext, p.v1, p.v2);
  }
};

// One full iterate: distributions, moments, and fields at all levels.
struct Iterate {
  std::vector<DistributionState> f;
  std::vector<CurrentSlice> currents;
  std::vector<FieldState> fields;
};

Iterate initial_iterate(const SimConfig& cfg, const PhaseSpaceGrid& g,
                        const VelocityTables& vt,
                        const DistributionState& f0_grid) {
  Iterate it;
  int n = cfg.n_steps();
  double dt = g.dt();
  CurrentSlice s0 = moments(f0_grid, g, vt);
  FieldState fs0 = initial_field_state(cfg);
  fs0.e1 = compute_e1(s0.rho, cfg.lambda, g.dx);
  it.f.reserve(n + 1);
  it.currents.reserve(n + 1);
  it.fields.reserve(n + 1);
  for (int m = 0; m <= n; ++m) {
    double t_m = m * dt;
    DistributionState fm = f0_grid;
    fm.t = t_m;
    CurrentSlice sm = s0;
    sm.t = t_m;
    FieldState km = fs0;
    km.t = t_m;
    it.f.push_back(std::move(fm));
    it.currents.push_back(std::move(sm));
    it.fields.push_back(std::move(km));
  }
  return it;
}

Iterate picard_update(const SimConfig& cfg, const PhaseSpaceGrid& g,
                      const VelocityTables& vt,
                      const TheoreticalConstants& tc,
                      const DistributionState& f0_grid, const Iterate& prev) {
  Iterate next;
  int n = cfg.n_steps();
  double dt = g.dt();
  const F0Spec& f0 = cfg.initial_data.f0;
  int nvn = g.n_vnodes();

  LadderCache ladder(prev.fields, cfg.potential, dt);
  LadderRhs rhs{&ladder, &cfg.potential};
  double h = dt / 4.0;

  next.f.reserve(n + 1);
  next.f.push_back(f0_grid);
  for (int m = 1; m <= n; ++m) {
    double t_m = m * dt;
    DistributionState fm;
    fm.t = t_m;
    fm.nx = g.nx;
    fm.nv = g.nv;
    fm.values.assign(size_t(g.nx + 1) * nvn * nvn, 0.0);
    if (!f0.is_zero()) {
      // Active window from the proven support bounds plus a two-cell
      // margin: outside it the traced value is an exact zero of f0, so
      // skipping the trace changes nothing.
      double conf = cfg.potential.is_zero() ? 0.0 : tc.theta0;
      double x_lo = std::max(cfg.initial_data.eps0 - t_m, conf) - 2.0 * g.dx;
      int i_lo = std::max(1, int(std::floor(x_lo / g.dx)));
      int i_hi = std::min(g.nx - 1, g.nx - i_lo);
      // Backward speed change is bounded by the electric field alone
      // (magnetic forces preserve |v|), so C2*t plus a few cells is a
      // safe reach; nodes beyond it land outside supp f0 exactly.
      double v_act = cfg.initial_data.k0 + tc.C2 * t_m + 4.0 * g.dv;
      double v_act2 = v_act * v_act;
      int n_sub = 4 * m;
      try {
        for (int i = i_lo; i <= i_hi; ++i) {
          double xi = g.x(i);
          for (int j = 0; j < nvn; ++j) {
            double vj = g.v(j);
            double rem = v_act2 - vj * vj;
            if (rem < 0.0) continue;
            double vr = std::sqrt(rem);
            int k_first =
                std::max(0, int(std::ceil((g.v_max - vr) / g.dv - 1e-12)));
            int k_last = std::min(
                nvn - 1, int(std::floor((g.v_max + vr) / g.dv + 1e-12)));
            for (int k = k_first; k <= k_last; ++k) {
              PhasePoint p{xi, vj, g.v(k)};
              for (int sub = 0; sub < n_sub; ++sub) {
                p = rk4_step(p, t_m - sub * h, -h, rhs);
                if (!(p.x > 0.0 && p.x < 1.0))
                  throw std::domain_error("foot left (0,1)");
              }
              double val = f0(p.x, p.v1, p.v2);
              if (val != 0.0) fm.values[fm.idx(i, j, k)] = val;
            }
          }
        }
      } catch (const std::domain_error&) {
        throw ConfinementError(
            "fixed-point transport: a backward characteristic left the "
            "spatial domain");
      }
    }
    refresh_support(fm, g);
    next.f.push_back(std::move(fm));
  }

  next.currents.reserve(n + 1);
  for (int m = 0; m <= n; ++m)
    next.currents.push_back(moments(next.f[m], g, vt));

  CurrentArchive arch{dt, g.dx, &next.currents};
  next.fields.reserve(n + 1);
  FieldState fs0 = initial_field_state(cfg);
  fs0.e1 = compute_e1(next.currents[0].rho, cfg.lambda, g.dx);
  next.fields.push_back(std::move(fs0));
  for (int m = 1; m <= n; ++m) {
    double t_m = m * dt;
    FieldState fs;
    fs.t = t_m;
    fs.e1 = compute_e1(next.currents[m].rho, cfg.lambda, g.dx);
    fs.k_plus.resize(g.nx + 1);
    fs.k_minus.resize(g.nx + 1);
    for (int i = 0; i <= g.nx; ++i) {
      double E2, B;
      detail::solve_direct_any(t_m, g.x(i), cfg, arch, E2, B);
      fs.k_plus[i] = E2 + B;
      fs.k_minus[i] = E2 - B;
    }
    next.fields.push_back(std::move(fs));
  }
  return next;
}

double iterate_distance(const Iterate& a, const Iterate& b) {
  double r = 0.0;
  for (size_t m = 0; m < a.f.size(); ++m) {
    const auto& va = a.f[m].values;
    const auto& vb = b.f[m].values;
    for (size_t id = 0; id < va.size(); ++id)
      r = std::max(r, std::abs(va[id] - vb[id]));
    const FieldState& fa = a.fields[m];
    const FieldState& fb = b.fields[m];
    for (int i = 0; i <= fa.nx(); ++i) {
      r = std::max(r, std::abs(fa.e1[i] - fb.e1[i]));
      r = std::max(r, std::abs(fa.e2(i) - fb.e2(i)));
      r = std::max(r, std::abs(fa.b(i) - fb.b(i)));
    }
  }
  return r;
}

}  // namespace

SimulationRun run_picard(const SimConfig& cfg, const StepObserver& observer) {
  validate_config(cfg);
  if (cfg.solver_mode != SolverMode::Picard)
    throw ConfigError("run_picard requires solver_mode=picard");

  SimulationRun run;
  run.cfg = cfg;
  run.grid = PhaseSpaceGrid(cfg.nx, cfg.nv, cfg.v_max);
  run.tables = VelocityTables(run.grid);
  run.constants = theoretical_constants(cfg);
  const PhaseSpaceGrid& g = run.grid;

  DistributionState f0_grid = initial_distribution(cfg, g);
  Iterate cur = initial_iterate(cfg, g, run.tables, f0_grid);

  bool converged = false;
  for (int it = 1; it <= cfg.picard_max_iter; ++it) {
    Iterate next =
        picard_update(cfg, g, run.tables, run.constants, f0_grid, cur);
    double r = iterate_distance(next, cur);
    run.picard_residuals.push_back(r);
    cur = std::move(next);
    if (r <= cfg.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergenceError(
        "fixed-point iteration did not reach tolerance within the iteration "
        "budget",
        run.picard_residuals);

  run.field_states = std::move(cur.fields);
  run.current_history = std::move(cur.currents);
  // Every stored value is an exact sample of f0, so the analytic sup is the
  // sharp max bound (the t=0 grid max can undershoot it between nodes).
  run.max_f0_grid = run.constants.f0_sup;
  run.f_initial = cur.f.front();
  run.f_final = cur.f.back();

  int n = cfg.n_steps();
  for (int m = 0; m <= n; ++m) {
    detail::finalize_level(run, cur.f[m], m);
    if (observer) observer(run, cur.f[m], m);
    if (!run.diagnostics[m].violations.empty()) {
      std::ostringstream os;
      os << "diagnostic violation at level " << m << ":";
      for (auto& v : run.diagnostics[m].violations) os << " " << v.first;
      throw ViolationError(os.str(), m, run.diagnostics[m].violations);
    }
  }
  return run;
}

}  // namespace rvm
