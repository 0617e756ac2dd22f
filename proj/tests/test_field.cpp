#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rvm/constants.hpp"
#include "rvm/distribution.hpp"
#include "rvm/errors.hpp"
#include "rvm/field.hpp"
#include "rvm/grid.hpp"
#include "rvm/vlasov.hpp"
#include "test_util.hpp"

using namespace rvm;
using doctest::Approx;

namespace {

CurrentSlice zero_slice(int nx, double t) {
  CurrentSlice s;
  s.t = t;
  s.rho.assign(nx + 1, 0.0);
  s.j1.assign(nx + 1, 0.0);
  s.j2.assign(nx + 1, 0.0);
  return s;
}

// Samples an analytic j2(t, x) onto uniform slices for archive-based tests.
std::vector<CurrentSlice> sample_j2(int nx, int n_levels, double dt,
                                    double (*fn)(double, double)) {
  std::vector<CurrentSlice> out;
  for (int m = 0; m <= n_levels; ++m) {
    CurrentSlice s = zero_slice(nx, m * dt);
    for (int i = 0; i <= nx; ++i) s.j2[i] = fn(m * dt, i * (1.0 / nx));
    out.push_back(std::move(s));
  }
  return out;
}

double pulse_j2(double t, double x) {
  return bump_profile((x - 0.45) / 0.25) * std::cos(3.0 * t);
}

double symmetric_j2(double t, double x) {
  return bump_profile((x - 0.5) / 0.3) * std::cos(2.0 * t);
}

}  // namespace

TEST_CASE("compute_e1: constants and closed forms") {
  int nx = 16;
  double dx = 1.0 / nx;

  std::vector<double> rho(nx + 1, 0.0);
  auto e1 = compute_e1(rho, 0.5, dx);
  for (double v : e1) CHECK(v == 0.5);

  rho.assign(nx + 1, 1.0);
  e1 = compute_e1(rho, 0.2, dx);
  CHECK(e1[0] == 0.2);
  for (int i = 0; i <= nx; ++i)
    CHECK(e1[i] == Approx(i * dx + 0.2).epsilon(1e-15));
  CHECK(e1[8] == Approx(0.7).epsilon(1e-15));
}

TEST_CASE("compute_e1: bump density against the frozen quadrature oracle") {
  int nx = 256;
  double dx = 1.0 / nx;
  std::vector<double> rho(nx + 1);
  for (int i = 0; i <= nx; ++i)
    rho[i] = bump_profile((i * dx - 0.5) / 0.25);
  auto e1 = compute_e1(rho, 0.0, dx);
  // int_0^1 bump((x-1/2)/(1/4)) dx = I1/4; trapezoid is superalgebraic on
  // this C-infinity compactly supported integrand.
  CHECK(e1[nx] == Approx(0.25 * testutil::kBumpI1).epsilon(1e-10));
  for (int i = 0; i < nx; ++i) CHECK(e1[i + 1] >= e1[i]);
}

TEST_CASE("retarded times: case pins and ordering") {
  double tp, tm;
  retarded_times(0.3, 0.4, tp, tm);
  CHECK(tp == 0.0);
  CHECK(tm == 0.0);

  // t > x and t > 1-x: both characteristics hit the lateral boundaries
  retarded_times(0.7, 0.4, tp, tm);
  CHECK(tp == Approx(0.3).epsilon(1e-15));
  CHECK(tm == Approx(0.1).epsilon(1e-15));

  retarded_times(0.9, 0.3, tp, tm);
  CHECK(tp == Approx(0.6).epsilon(1e-15));
  CHECK(tm == Approx(0.2).epsilon(1e-15));

  retarded_times(0.5, 0.4, tp, tm);
  CHECK(tp == Approx(0.1).epsilon(1e-15));
  CHECK(tm == 0.0);

  // boundary of the cases: t == x keeps t_plus at 0
  retarded_times(0.4, 0.4, tp, tm);
  CHECK(tp == 0.0);
  CHECK(tm == 0.0);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ut(1e-3, 3.0), ux(1e-3, 0.5);
  for (int k = 0; k < 200; ++k) {
    double t = ut(rng), x = ux(rng);
    retarded_times(t, x, tp, tm);
    CHECK(0.0 <= tm);
    CHECK(tm <= tp);
    CHECK(tp < t);
  }
}

TEST_CASE("initial field state") {
  SimConfig cfg = testutil::zero_config();
  FieldState fs = initial_field_state(cfg);
  CHECK(fs.t == 0.0);
  CHECK(fs.nx() == cfg.nx);
  for (int i = 0; i <= cfg.nx; ++i) {
    CHECK(fs.e1[i] == 0.0);
    CHECK(fs.k_plus[i] == 0.0);
    CHECK(fs.k_minus[i] == 0.0);
  }

  // E2_0 constant 1, B_0 zero -> k+ = k- = 1
  cfg.initial_data.E2_0.form = AnalyticForm::Constant;
  cfg.initial_data.E2_0.value = 1.0;
  fs = initial_field_state(cfg);
  for (int i = 0; i <= cfg.nx; ++i) {
    CHECK(fs.k_plus[i] == 1.0);
    CHECK(fs.k_minus[i] == 1.0);
    CHECK(fs.e2(i) == 1.0);
    CHECK(fs.b(i) == 0.0);
  }

  // e1 starts at the vacuum value lambda on every node; the driver installs
  // the rho moment of f0 via compute_e1 (covered by compute_e1 tests and by
  // the driver run assertions)
  SimConfig bump = testutil::small_bump_config(128, 64);
  bump.lambda = 0.25;
  fs = initial_field_state(bump);
  for (int i = 0; i <= bump.nx; ++i) CHECK(fs.e1[i] == 0.25);

  // the combination compute_e1(moments(f0)) reaches lambda + ||f0||_1
  PhaseSpaceGrid g(bump.nx, bump.nv, bump.v_max);
  VelocityTables vt(g);
  DistributionState f0 = initial_distribution(bump, g);
  CurrentSlice cs = moments(f0, g, vt);
  std::vector<double> e1 = compute_e1(cs.rho, bump.lambda, g.dx);
  CHECK(e1[0] == 0.25);
  for (int i = 0; i < bump.nx; ++i) CHECK(e1[i + 1] >= e1[i] - 1e-15);
  CHECK(e1[bump.nx] == Approx(0.25 + testutil::kL1_A15).epsilon(5e-3));
}

TEST_CASE("step_fields: pure transport is an exact shift with injection") {
  // right-moving d'Alembert wave k+(t,x) = cos(2 pi (x - t)), k- = 0
  int nx = 64;
  double dx = 1.0 / nx;
  FieldState fs;
  fs.t = 0.0;
  fs.e1.assign(nx + 1, 0.0);
  fs.k_plus.resize(nx + 1);
  fs.k_minus.assign(nx + 1, 0.0);
  for (int i = 0; i <= nx; ++i) fs.k_plus[i] = std::cos(2.0 * M_PI * i * dx);

  BoundaryDataSpec bd;
  bd.E2_b_left.form = AnalyticForm::Cosine;
  bd.E2_b_left.amplitude = 1.0;
  bd.E2_b_left.omega = 2.0 * M_PI;  // cos(2 pi t) = cos(2 pi (0 - t))

  std::vector<double> k0 = fs.k_plus;
  int n = 10;
  for (int m = 0; m < n; ++m) {
    CurrentSlice a = zero_slice(nx, fs.t), b = zero_slice(nx, fs.t + dx);
    fs = step_fields(fs, a, b, bd, 0.0, 1.0);
  }
  CHECK(fs.t == Approx(n * dx).epsilon(1e-15));
  for (int i = 0; i <= nx; ++i) {
    double expected = (i >= n) ? k0[i - n] : inflow_kplus(bd, (n - i) * dx);
    CHECK(fs.k_plus[i] == expected);  // bit-identical
    CHECK(fs.k_minus[i] == 0.0);
  }
}

TEST_CASE("step_fields: uniform current, zero data") {
  // inside the light cone of the data, E2(t,x) = -t and B = 0
  int nx = 32;
  double dx = 1.0 / nx;
  FieldState fs;
  fs.t = 0.0;
  fs.e1.assign(nx + 1, 0.0);
  fs.k_plus.assign(nx + 1, 0.0);
  fs.k_minus.assign(nx + 1, 0.0);
  BoundaryDataSpec bd;  // all zero

  int n = 8;
  for (int m = 0; m < n; ++m) {
    CurrentSlice a = zero_slice(nx, m * dx), b = zero_slice(nx, (m + 1) * dx);
    a.j2.assign(nx + 1, 1.0);
    b.j2.assign(nx + 1, 1.0);
    fs = step_fields(fs, a, b, bd, 0.0, 1.0);
  }
  double t = n * dx;
  for (int i = n; i <= nx - n; ++i) {
    CHECK(fs.e2(i) == Approx(-t).epsilon(1e-14));
    CHECK(fs.b(i) == Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("step_fields: boundary traces and gauge identity") {
  SimConfig cfg = testutil::load_catalog("wave.json");
  FieldState fs = initial_field_state(cfg);
  int nx = cfg.nx;
  for (int m = 0; m < 12; ++m) {
    CurrentSlice a = zero_slice(nx, fs.t), b = zero_slice(nx, fs.t + cfg.dx());
    fs = step_fields(fs, a, b, cfg.boundary_data, cfg.lambda, cfg.t_final);
    // wave catalog data are trace-consistent: walls equal the data exactly
    CHECK(fs.e2(0) == Approx(cfg.boundary_data.E2_b_left(fs.t)).epsilon(1e-14));
    CHECK(fs.b(0) == Approx(cfg.boundary_data.B_b_left(fs.t)).epsilon(1e-14));
    CHECK(fs.e2(nx) == Approx(cfg.boundary_data.E2_b_right(fs.t)).epsilon(1e-14));
    CHECK(fs.b(nx) == Approx(cfg.boundary_data.B_b_right(fs.t)).epsilon(1e-14));
    // E1(1) - E1(0) = int rho (zero here)
    CHECK(fs.e1[nx] - fs.e1[0] == Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("step_fields guards") {
  int nx = 16;
  FieldState fs;
  fs.t = 0.9375;  // 15/16
  fs.e1.assign(nx + 1, 0.0);
  fs.k_plus.assign(nx + 1, 0.0);
  fs.k_minus.assign(nx + 1, 0.0);
  BoundaryDataSpec bd;
  CurrentSlice a = zero_slice(nx, fs.t), b = zero_slice(nx, fs.t + 1.0 / nx);
  // stepping to t = 1 is fine; stepping beyond t_final = 1 must throw
  FieldState next = step_fields(fs, a, b, bd, 0.0, 1.0);
  CurrentSlice c = zero_slice(nx, next.t), d = zero_slice(nx, next.t + 1.0 / nx);
  CHECK_THROWS(step_fields(next, c, d, bd, 0.0, 1.0));

  CurrentSlice wrong = zero_slice(nx, 0.0);
  CHECK_THROWS(step_fields(fs, wrong, b, bd, 0.0, 2.0));
}

TEST_CASE("current archive: bilinear space-time interpolation") {
  // j2(t, x) = 2x + 3t is reproduced exactly by bilinear interpolation
  int nx = 8;
  double dt = 1.0 / nx;
  std::vector<CurrentSlice> slices;
  for (int m = 0; m <= 4; ++m) {
    CurrentSlice s = zero_slice(nx, m * dt);
    for (int i = 0; i <= nx; ++i) s.j2[i] = 2.0 * (i * dt) + 3.0 * (m * dt);
    slices.push_back(std::move(s));
  }
  CurrentArchive arch{dt, 1.0 / nx, &slices};
  CHECK(arch.j2_at(0.0, 0.0) == Approx(0.0).epsilon(1e-15));
  CHECK(arch.j2_at(0.3, 0.7) == Approx(2.0 * 0.7 + 3.0 * 0.3).epsilon(1e-13));
  CHECK(arch.j2_at(0.05, 0.55) == Approx(2.0 * 0.55 + 3.0 * 0.05).epsilon(1e-13));
  // clamped beyond the stored range in x
  CHECK(arch.j2_at(0.1, 1.5) == Approx(2.0 + 0.3).epsilon(1e-13));
}

TEST_CASE("direct solve: constant solution and case-3 pin") {
  SimConfig cfg = testutil::zero_config(32, 4, 1.0, 0.75);
  cfg.initial_data.E2_0.form = AnalyticForm::Constant;
  cfg.initial_data.E2_0.value = 1.0;
  cfg.boundary_data.E2_b_left.form = AnalyticForm::Constant;
  cfg.boundary_data.E2_b_left.value = 1.0;
  cfg.boundary_data.E2_b_right.form = AnalyticForm::Constant;
  cfg.boundary_data.E2_b_right.value = 1.0;

  std::vector<CurrentSlice> slices;
  for (int m = 0; m <= 24; ++m) slices.push_back(zero_slice(32, m / 32.0));
  CurrentArchive arch{1.0 / 32.0, 1.0 / 32.0, &slices};

  double E2, B;
  for (double t : {0.05, 0.3, 0.6, 0.74})
    for (double x : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      solve_e2_b_direct(t, x, cfg, arch, E2, B);
      CHECK(E2 == Approx(1.0).epsilon(1e-14));
      CHECK(B == Approx(0.0).epsilon(1e-14));
    }

  // case-3 pin: zero initial data, unit E2 boundary both ends, no current:
  // E2 = (E2b + E2b)/2 = 1, B = (E2b - E2b)/2 = 0 at (t,x) = (0.9, 0.3)
  SimConfig c3 = cfg;
  c3.initial_data.E2_0 = AnalyticFn{};  // zero (corner-incompatible on
  c3.t_final = 1.0;                     // purpose; representation only)
  solve_e2_b_direct(0.9, 0.3, c3, arch, E2, B);
  CHECK(E2 == Approx(1.0).epsilon(1e-14));
  CHECK(B == Approx(0.0).epsilon(1e-14));
}

TEST_CASE("direct solve: domain guards") {
  SimConfig cfg = testutil::zero_config();
  std::vector<CurrentSlice> slices{zero_slice(cfg.nx, 0.0)};
  CurrentArchive arch{cfg.dt(), cfg.dx(), &slices};
  double E2, B;
  CHECK_THROWS_AS(solve_e2_b_direct(-0.1, 0.5, cfg, arch, E2, B),
                  std::domain_error);
  CHECK_THROWS_AS(solve_e2_b_direct(0.1, 0.0, cfg, arch, E2, B),
                  std::domain_error);
  CHECK_THROWS_AS(solve_e2_b_direct(0.1, 1.0, cfg, arch, E2, B),
                  std::domain_error);
}

TEST_CASE("direct solve: mirror symmetry across x = 1/2") {
  // mirror-symmetric source, zero data: E2 must be even and B odd about 1/2;
  // x > 1/2 exercises the mirrored formulas against the unmirrored ones
  int nx = 64;
  double dt = 1.0 / nx;
  SimConfig cfg = testutil::zero_config(nx, 4, 1.0, 1.0);
  auto slices = sample_j2(nx, 48, dt, symmetric_j2);
  CurrentArchive arch{dt, dt, &slices};

  double E2l, Bl, E2r, Br;
  for (double t : {0.1, 0.35, 0.7})
    for (double x : {0.05, 0.2, 0.3, 0.45}) {
      solve_e2_b_direct(t, x, cfg, arch, E2l, Bl);
      solve_e2_b_direct(t, 1.0 - x, cfg, arch, E2r, Br);
      CHECK(E2l == Approx(E2r).epsilon(1e-12));
      CHECK(Bl == Approx(-Br).epsilon(1e-12));
    }

  // continuity across the branch switch at x = 1/2
  solve_e2_b_direct(0.35, 0.5, cfg, arch, E2l, Bl);
  solve_e2_b_direct(0.35, 0.5 + 1e-9, cfg, arch, E2r, Br);
  CHECK(E2l == Approx(E2r).epsilon(1e-6));
  CHECK(Bl == Approx(Br).epsilon(1e-6));
}

TEST_CASE("march and direct representation agree on a smooth pulse") {
  int nx = 64;
  double dx = 1.0 / nx;
  int n = 10;
  auto slices = sample_j2(nx, n, dx, pulse_j2);
  CurrentArchive arch{dx, dx, &slices};

  SimConfig cfg = testutil::zero_config(nx, 4, 1.0, 1.0);
  FieldState fs = initial_field_state(cfg);
  for (int m = 0; m < n; ++m)
    fs = step_fields(fs, slices[m], slices[m + 1], cfg.boundary_data,
                     cfg.lambda, cfg.t_final);

  double t = n * dx;
  double worst = 0.0;
  for (int i = 1; i < nx; ++i) {
    double E2, B;
    solve_e2_b_direct(t, i * dx, cfg, arch, E2, B);
    worst = std::max(worst, std::abs(E2 - fs.e2(i)));
    worst = std::max(worst, std::abs(B - fs.b(i)));
  }
  CHECK(worst <= 1e-12);
}
