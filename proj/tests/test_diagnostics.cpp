#include <doctest.h>

#include <cmath>
#include <vector>

#include "rvm/diagnostics.hpp"
#include "rvm/driver.hpp"
#include "rvm/errors.hpp"
#include "test_util.hpp"

using namespace rvm;
using doctest::Approx;

namespace {

DistributionState zero_f(const PhaseSpaceGrid& g) {
  DistributionState f;
  f.t = 0.0;
  f.nx = g.nx;
  f.nv = g.nv;
  f.values.assign(size_t(g.n_xnodes()) * g.n_vnodes() * g.n_vnodes(), 0.0);
  refresh_support(f, g);
  return f;
}

FieldState const_field(int nx, double e2, double b) {
  FieldState fs;
  fs.t = 0.0;
  fs.e1.assign(nx + 1, 0.0);
  fs.k_plus.assign(nx + 1, e2 + b);
  fs.k_minus.assign(nx + 1, e2 - b);
  return fs;
}

const SimulationRun& confined_small_run() {
  static SimulationRun run =
      run_time_marching(testutil::small_bump_config(64, 32, 0.25));
  return run;
}

}  // namespace

TEST_CASE("energy density: closed-form pins") {
  PhaseSpaceGrid g(16, 4, 1.0);
  VelocityTables vt(g);
  DistributionState f = zero_f(g);
  std::vector<double> e, m;

  energy_density(const_field(g.nx, 1.0, 0.0), f, g, vt, e, m);
  for (int i = 0; i <= g.nx; ++i) {
    CHECK(e[i] == 0.5);
    CHECK(m[i] == 0.0);
  }

  energy_density(const_field(g.nx, 1.0, 1.0), f, g, vt, e, m);
  for (int i = 0; i <= g.nx; ++i) {
    CHECK(e[i] == 1.0);
    CHECK(m[i] == -1.0);
  }
}

TEST_CASE("energy density: cold bump kinetic term against the oracle") {
  SimConfig cfg = testutil::small_bump_config(64, 64);
  PhaseSpaceGrid g(cfg.nx, cfg.nv, cfg.v_max);
  VelocityTables vt(g);
  DistributionState f = initial_distribution(cfg, g);
  std::vector<double> e, m;
  energy_density(const_field(g.nx, 0.0, 0.0), f, g, vt, e, m);

  // int sqrt(1+|v|^2) f dv = A bump(sx) 2 pi rv^2 J with J recovered from
  // the frozen relativistic L1 norm (J = rel / (A rx I1 2 pi rv^2))
  double J = testutil::kRel_A15 /
             (1.5 * 0.2 * testutil::kBumpI1 * 2.0 * M_PI * 0.25);
  double center = 1.5 * 2.0 * M_PI * 0.25 * J;
  CHECK(e[32] == Approx(center).epsilon(0.01));
  CHECK(e[26] == Approx(center * bump_profile((g.x(26) - 0.5) / 0.2)).epsilon(0.01));
  CHECK(e[12] == 0.0);
  for (int i = 0; i <= g.nx; ++i) CHECK(std::abs(m[i]) <= 1e-13);
}

TEST_CASE("integrate_x: trapezoid basics") {
  std::vector<double> ones(17, 1.0);
  CHECK(integrate_x(ones, 1.0 / 16) == Approx(1.0).epsilon(1e-15));
  std::vector<double> lin(17);
  for (int i = 0; i <= 16; ++i) lin[i] = i / 16.0;
  CHECK(integrate_x(lin, 1.0 / 16) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("energy balance: vacuum is exact") {
  SimulationRun run = run_time_marching(testutil::zero_config());
  for (int m = 0; m <= run.n_steps(); ++m)
    CHECK(check_energy_balance(run, m) == 0.0);
}

TEST_CASE("energy balance: closed box with an escaping pulse") {
  // interior pulse, zero boundary data: energy is exactly constant while
  // the pulse is interior, then leaves through the walls; the flux series
  // (marched wall traces) accounts for the loss
  SimConfig cfg = testutil::zero_config(128, 4, 1.0, 1.0);
  cfg.initial_data.E2_0.form = AnalyticForm::GaussianBump;
  cfg.initial_data.E2_0.amplitude = 0.05;
  cfg.initial_data.E2_0.center = 0.5;
  cfg.initial_data.E2_0.width = 0.3;
  SimulationRun run = run_time_marching(cfg);

  double E0 = run.total_energy[0];
  CHECK(E0 > 0.0);
  for (int m = 0; m <= 19; ++m)  // support [0.2-t, 0.8+t] still interior
    CHECK(run.total_energy[m] == Approx(E0).epsilon(1e-12));
  for (int m = 0; m <= run.n_steps(); ++m)
    CHECK(check_energy_balance(run, m) <= 1e-4);
  // by t = 1 every node has been overwritten by zero inflow: exactly empty
  CHECK(run.total_energy.back() == 0.0);
}

TEST_CASE("energy balance: driven boundary at second order") {
  SimConfig cfg = testutil::load_catalog("driven.json");
  cfg.nx = 64;
  cfg.t_final = 0.5;
  SimulationRun run = run_time_marching(cfg);
  for (int m = 0; m <= run.n_steps(); ++m)
    CHECK(check_energy_balance(run, m) <= 1e-3);
}

TEST_CASE("cone estimate: vacuum and pure wave") {
  SimulationRun vac = run_time_marching(testutil::zero_config());
  auto [lhs0, rhs0] = check_cone_estimate(vac, vac.n_steps(), 0.25);
  CHECK(lhs0 == 0.0);
  CHECK(rhs0 >= 0.0);
  CHECK_THROWS_AS(check_cone_estimate(vac, 1, 0.75), std::domain_error);
  CHECK_THROWS_AS(check_cone_estimate(vac, 1, 0.0), std::domain_error);

  SimulationRun wave = run_time_marching(testutil::load_catalog("wave.json"));
  for (double x : {0.1, 0.25, 0.4, 0.5}) {
    auto [lhs, rhs] = check_cone_estimate(wave, wave.n_steps(), x);
    CHECK(lhs == 0.0);
    CHECK(rhs >= 0.0);
  }
  // pin at (t, x) = (0.5, 0.25): t- = 0, t+ = 0.25,
  // rhs = int e(0) + int_0^(1/4) (E2 B)(tau, 0) dtau
  //     = 1/8 + (1/4)(1/8) = 0.15625
  auto [lhs, rhs] = check_cone_estimate(wave, wave.n_steps(), 0.25);
  CHECK(lhs == 0.0);
  CHECK(rhs == Approx(0.15625).epsilon(2e-3));
}

TEST_CASE("cone estimate: confined run has positive margin") {
  const SimulationRun& run = confined_small_run();
  for (double x : {0.2, 0.35, 0.5})
    for (int m : {8, 16}) {
      auto [lhs, rhs] = check_cone_estimate(run, m, x);
      CHECK(lhs >= 0.0);
      CHECK(lhs <= rhs);
    }
}

TEST_CASE("check_all: healthy runs report no violations") {
  SimulationRun vac = run_time_marching(testutil::zero_config());
  for (const auto& rep : vac.diagnostics) {
    CHECK(rep.violations.empty());
    CHECK(rep.total_charge == 0.0);
    CHECK(rep.max_f == 0.0);
    CHECK(rep.e1_max == 0.0);
  }

  const SimulationRun& run = confined_small_run();
  for (const auto& rep : run.diagnostics) CHECK(rep.violations.empty());

  // E1 saturates its bound (E1(1) = total charge) without tripping it
  double l1 = run.constants.f0_l1;
  CHECK(run.diagnostics.back().e1_max == Approx(l1).epsilon(5e-3));
  CHECK(run.diagnostics.back().e1_max <= run.constants.e1_bound + 1e-3);
}

TEST_CASE("check_all: tampered bounds are detected and named") {
  // rerun the checker against artificially shrunk constants: the same data
  // must now violate the named checks
  SimulationRun run = confined_small_run();  // copy
  int last = run.n_steps();

  run.max_f0_grid *= 0.5;
  DiagnosticsReport rep = check_all(run, last, run.f_final);
  bool has_maxp = false;
  for (auto& [name, margin] : rep.violations) {
    if (name == "max_principle") {
      has_maxp = true;
      CHECK(margin > 0.0);
    }
  }
  CHECK(has_maxp);

  SimulationRun run2 = confined_small_run();
  run2.constants.C1 = 0.0;
  run2.constants.e1_bound = 0.0;
  run2.cfg.diag_allowance = 0.0;  // no resolution slack to hide behind
  rep = check_all(run2, last, run2.f_final);
  bool has_e1 = false, has_e2 = false;
  for (auto& [name, margin] : rep.violations) {
    if (name == "e1_bound") has_e1 = true;
    if (name == "e2_bound") has_e2 = true;
  }
  CHECK(has_e1);
  CHECK(has_e2);
}

TEST_CASE("discrete energy identity: interior residual shrinks with dx") {
  // |(e^{n+1}-e^n)/dt - (m_{i+1}-m_{i-1})/(2 dx)| -> 0 under refinement
  auto residual = [](int nx, int nv) {
    SimConfig cfg = testutil::small_bump_config(nx, nv, 0.125);
    SimulationRun run = run_time_marching(cfg);
    PhaseSpaceGrid g = run.grid;
    VelocityTables vt(g);
    // rebuild f at the final two levels by re-running is costly; instead use
    // the stored field states with the zero-f electromagnetic part only when
    // f is negligible there: evaluate on a fields-only window away from the
    // plasma support, where e and m are purely electromagnetic
    int n = run.n_steps();
    std::vector<double> e0, m0, e1v, m1;
    DistributionState fz = zero_f(g);
    energy_density(run.field_states[n - 1], fz, g, vt, e0, m0);
    energy_density(run.field_states[n], fz, g, vt, e1v, m1);
    double worst = 0.0;
    for (int i = 2; i < g.nx / 4; ++i) {  // left of the plasma support
      double de = (e1v[i] - e0[i]) / g.dt();
      double dm = (m0[i + 1] - m0[i - 1]) / (2.0 * g.dx);
      worst = std::max(worst, std::abs(de - dm));
    }
    return worst;
  };
  double r_coarse = residual(64, 16);
  double r_fine = residual(128, 16);
  CHECK(r_fine <= r_coarse / 1.5);
}
