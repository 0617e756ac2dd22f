#include "rvm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rvm/driver.hpp"
#include "rvm/vlasov.hpp"

namespace rvm {

void energy_density(const FieldState& field, const DistributionState& f,
                    const PhaseSpaceGrid& g, const VelocityTables& vt,
                    std::vector<double>& e_out, std::vector<double>& m_out) {
  std::vector<double> kin = weighted_moment(f, g, vt, vt.lorentz);
  // plain v1 weight (momentum flux carries v1, not vhat1)
  int nvn = g.n_vnodes();
  std::vector<double> w1(size_t(nvn) * nvn);
  for (int j = 0; j < nvn; ++j)
    for (int k = 0; k < nvn; ++k) w1[size_t(j) * nvn + k] = g.v(j);
  std::vector<double> mom = weighted_moment(f, g, vt, w1);

  e_out.resize(g.nx + 1);
  m_out.resize(g.nx + 1);
  for (int i = 0; i <= g.nx; ++i) {
    double e1 = field.e1[i], e2 = field.e2(i), b = field.b(i);
    e_out[i] = 0.5 * (e1 * e1 + e2 * e2 + b * b) + kin[i];
    m_out[i] = -mom[i] - e2 * b;
  }
}

double integrate_x(const std::vector<double>& a, double dx) {
  double acc = 0.5 * (a.front() + a.back());
  for (size_t i = 1; i + 1 < a.size(); ++i) acc += a[i];
  return acc * dx;
}

double check_energy_balance(const SimulationRun& run, int t_index) {
  double lhs = run.total_energy[t_index];
  double rhs = run.total_energy[0] + run.flux_accum[t_index];
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

namespace {

// Bilinear evaluation of a per-level node series (value[m][i]).
double series_at(const std::vector<std::vector<double>>& lv, double dt,
                 double dx, double tau, double y) {
  int last = int(lv.size()) - 1;
  double a = tau / dt;
  int m = std::clamp(int(std::floor(a)), 0, std::max(0, last - 1));
  double th = std::clamp(a - m, 0.0, 1.0);
  int nx = int(lv[0].size()) - 1;
  double b = y / dx;
  int i = std::clamp(int(std::floor(b)), 0, nx - 1);
  double w = std::clamp(b - i, 0.0, 1.0);
  auto lerp = [&](const std::vector<double>& s) {
    return (1.0 - w) * s[i] + w * s[i + 1];
  };
  if (last == 0) return lerp(lv[0]);
  return (1.0 - th) * lerp(lv[m]) + th * lerp(lv[m + 1]);
}

// Trapezoid of g(tau) over [ts, te] with breakpoints at the level times.
template <class G>
double integrate_levels(G&& g, double ts, double te, double dt) {
  if (!(te > ts)) return 0.0;
  double acc = 0.0;
  double prev_t = ts, prev_g = g(ts);
  long m = long(std::floor(ts / dt)) + 1;
  for (double tk = m * dt; tk < te - 1e-14 * (1.0 + te); tk = ++m * dt) {
    if (tk <= prev_t) continue;
    double gk = g(tk);
    acc += 0.5 * (tk - prev_t) * (prev_g + gk);
    prev_t = tk;
    prev_g = gk;
  }
  double ge = g(te);
  acc += 0.5 * (te - prev_t) * (prev_g + ge);
  return acc;
}

}  // namespace

std::pair<double, double> check_cone_estimate(const SimulationRun& run,
                                              int t_index, double x) {
  if (!(x > 0.0 && x <= 0.5))
    throw std::domain_error("check_cone_estimate: x must lie in (0, 1/2]");
  double dt = run.grid.dt();
  double dx = run.grid.dx;
  double t = run.field_states[t_index].t;
  double tp, tm;
  retarded_times(t, x, tp, tm);

  auto q_at = [&](double tau, double y) {
    return series_at(run.q_history, dt, dx, tau, y);
  };
  double lhs =
      integrate_levels([&](double tau) { return q_at(tau, x - t + tau); }, tp,
                       t, dt) +
      integrate_levels([&](double tau) { return q_at(tau, x + t - tau); }, tm,
                       t, dt);

  // total energy at t-minus (linear in time between stored levels)
  double a = tm / dt;
  int m0 = std::clamp(int(std::floor(a)), 0, std::max(0, t_index - 1));
  double th = std::clamp(a - m0, 0.0, 1.0);
  double e_tm = (run.total_energy.size() == 1)
                    ? run.total_energy[0]
                    : (1.0 - th) * run.total_energy[m0] +
                          th * run.total_energy[m0 + 1];

  auto wall_prod = [&](double tau) {
    double b = tau / dt;
    int m = std::clamp(int(std::floor(b)), 0,
                       std::max(0, int(run.field_states.size()) - 2));
    double w = std::clamp(b - m, 0.0, 1.0);
    auto prod = [&](int lev) {
      const FieldState& fsl = run.field_states[lev];
      return fsl.e2(0) * fsl.b(0);
    };
    if (run.field_states.size() == 1) return prod(0);
    return (1.0 - w) * prod(m) + w * prod(m + 1);
  };
  double rhs = e_tm + integrate_levels(wall_prod, tm, tp, dt);
  return {lhs, rhs};
}

DiagnosticsReport check_all(const SimulationRun& run, int t_index,
                            const DistributionState& f) {
  const SimConfig& cfg = run.cfg;
  const TheoreticalConstants& tc = run.constants;
  const PhaseSpaceGrid& g = run.grid;
  const FieldState& fs = run.field_states[t_index];
  if (std::abs(f.t - fs.t) > 1e-9)
    throw std::invalid_argument("check_all: distribution time mismatch");

  DiagnosticsReport rep;
  rep.t = fs.t;
  rep.total_charge = integrate_x(run.current_history[t_index].rho, g.dx);
  rep.total_energy = run.total_energy[t_index];
  rep.boundary_flux_accum = run.flux_accum[t_index];
  rep.max_f = f.max_value;

  for (int i = 0; i <= g.nx; ++i) {
    rep.e1_max = std::max(rep.e1_max, std::abs(fs.e1[i]));
    rep.e2_max = std::max(rep.e2_max, std::abs(fs.e2(i)));
    rep.b_max = std::max(rep.b_max, std::abs(fs.b(i)));
  }

  double tol_support = 1e-9 * run.max_f0_grid;
  SupportExtents se = support_extents(f, g, tol_support);
  rep.sigma_empty = se.empty;
  rep.sigma_lo = se.x_lo;
  rep.sigma_hi = se.x_hi;
  rep.p_radius = se.v_radius;

  double allow = cfg.diag_allowance * (g.dx * g.dx + g.dv * g.dv);
  const double rel = 1e-8;
  auto flag = [&rep](const char* name, double margin) {
    if (margin > 0.0) rep.violations.emplace_back(name, margin);
  };

  flag("e1_bound", rep.e1_max - (tc.e1_bound * (1.0 + rel) + allow));
  flag("e2_bound", rep.e2_max - (tc.C1 * (1.0 + rel) + allow));
  flag("b_bound", rep.b_max - (tc.C1 * (1.0 + rel) + allow));

  double q0 = run.diagnostics.empty() ? rep.total_charge
                                      : run.diagnostics[0].total_charge;
  double q_scale = std::max(q0, 1.0);
  flag("charge_conservation",
       std::abs(rep.total_charge - q0) - (rel + allow) * q_scale);

  flag("max_principle", rep.max_f - run.max_f0_grid);
  flag("positivity", -f.min_value);

  double t = rep.t;
  flag("v_support", rep.p_radius - (cfg.initial_data.k0 + tc.C2 * t +
                                    2.0 * g.dv + allow));
  if (cfg.potential.enforce_blowup && !se.empty) {
    double denom = 1.0 / cfg.potential.c0 + 2.0 * cfg.initial_data.k0 + tc.C1 +
                   3.0 * tc.C2 * t + tc.psi_sup_eps0;
    double theta_t = std::pow(cfg.potential.c0 / denom, 1.0 / cfg.potential.gamma);
    double slack = g.dx + allow;
    flag("x_support_left", (theta_t - slack) - se.x_lo);
    flag("x_support_right", se.x_hi - (1.0 - theta_t + slack));
  }

  const CurrentSlice& cs = run.current_history[t_index];
  double rho_max = 0.0, j_max = 0.0;
  for (int i = 0; i <= g.nx; ++i) {
    rho_max = std::max(rho_max, std::abs(cs.rho[i]));
    j_max = std::max(j_max, std::hypot(cs.j1[i], cs.j2[i]));
  }
  flag("rho_bound", rho_max - (tc.rho_j_bound * (1.0 + rel) + allow));
  flag("j_bound", j_max - (tc.rho_j_bound * (1.0 + rel) + allow));

  flag("energy_balance", check_energy_balance(run, t_index) - (rel + allow));
  return rep;
}

}  // namespace rvm
