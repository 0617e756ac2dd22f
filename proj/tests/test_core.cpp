#include <doctest.h>

#include <cmath>
#include <string>

#include "rvm/analytic.hpp"
#include "rvm/config.hpp"
#include "rvm/constants.hpp"
#include "rvm/errors.hpp"
#include "rvm/grid.hpp"
#include "rvm/potential.hpp"
#include "test_util.hpp"

using namespace rvm;
using doctest::Approx;

TEST_CASE("bump profile values and support") {
  CHECK(bump_profile(0.0) == 1.0);
  CHECK(bump_profile(1.0) == 0.0);
  CHECK(bump_profile(-1.0) == 0.0);
  CHECK(bump_profile(2.0) == 0.0);
  // exp(1 - 1/(1 - 0.25)) = exp(-1/3), 30-digit oracle
  CHECK(bump_profile(0.5) == Approx(0.71653131057378925043).epsilon(1e-15));
  CHECK(bump_profile(-0.5) == bump_profile(0.5));
  CHECK(bump_profile(0.3) > bump_profile(0.6));
  CHECK(bump_profile(0.999) > 0.0);
}

TEST_CASE("analytic function catalog") {
  AnalyticFn zero;
  CHECK(zero(0.3) == 0.0);
  CHECK(zero.is_zero());
  CHECK(zero.sup_norm() == 0.0);

  AnalyticFn cst;
  cst.form = AnalyticForm::Constant;
  cst.value = -2.0;
  CHECK(cst(17.0) == -2.0);
  CHECK(cst.sup_norm() == 2.0);
  CHECK_FALSE(cst.is_zero());

  AnalyticFn cosine;
  cosine.form = AnalyticForm::Cosine;
  cosine.amplitude = 0.5;
  cosine.omega = 2.0 * M_PI;
  cosine.phase = -M_PI / 2.0;
  CHECK(std::abs(cosine(0.0)) < 1e-15);       // 0.5*sin(0)
  CHECK(cosine(0.25) == Approx(0.5).epsilon(1e-15));
  CHECK(cosine.sup_norm() == 0.5);

  AnalyticFn gb;
  gb.form = AnalyticForm::GaussianBump;
  gb.amplitude = 0.05;
  gb.center = 0.5;
  gb.width = 0.3;
  CHECK(gb(0.5) == 0.05);
  CHECK(gb(0.2) == 0.0);
  CHECK(gb(0.65) == Approx(0.05 * bump_profile(0.5)).epsilon(1e-15));
  CHECK(gb.sup_norm() == 0.05);

  double lo, hi;
  CHECK(gb.compact_support(lo, hi));
  CHECK(lo == Approx(0.2));
  CHECK(hi == Approx(0.8));
  CHECK(zero.compact_support(lo, hi));
  CHECK(lo > hi);  // empty
  CHECK_FALSE(cosine.compact_support(lo, hi));
}

TEST_CASE("analytic form names round-trip") {
  for (AnalyticForm f : {AnalyticForm::Zero, AnalyticForm::Constant,
                         AnalyticForm::Cosine, AnalyticForm::GaussianBump}) {
    AnalyticForm back;
    REQUIRE(form_from_name(form_name(f), back));
    CHECK(back == f);
  }
  AnalyticForm dummy;
  CHECK_FALSE(form_from_name("sinusoid", dummy));
}

TEST_CASE("external potential: psi, b_ext, sups") {
  ExternalPotential pot;  // reciprocal, c0=1, gamma=1
  CHECK(pot.psi(0.5) == 4.0);
  CHECK(pot.psi(0.25) == Approx(1.0 / 0.1875).epsilon(1e-15));
  CHECK(pot.b_ext(0.5) == 0.0);
  // gamma*c0*(2x-1)/(x(1-x))^(gamma+1) at x = 0.25: 30-digit oracle
  CHECK(pot.b_ext(0.25) == Approx(-14.222222222222222222).epsilon(1e-14));
  CHECK(pot.b_ext(0.75) > 0.0);

  // b_ext must be the derivative of psi (central difference oracle)
  for (double x : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    double h = 1e-6;
    double fd = (pot.psi(x + h) - pot.psi(x - h)) / (2.0 * h);
    CHECK(pot.b_ext(x) == Approx(fd).epsilon(1e-7));
  }

  ExternalPotential pot2;
  pot2.gamma = 2.0;
  pot2.c0 = 0.7;
  CHECK(pot2.psi(0.5) == Approx(0.7 / 0.0625).epsilon(1e-15));
  for (double x : {0.3, 0.55, 0.7}) {
    double h = 1e-6;
    double fd = (pot2.psi(x + h) - pot2.psi(x - h)) / (2.0 * h);
    CHECK(pot2.b_ext(x) == Approx(fd).epsilon(1e-7));
  }

  // monotone away from 1/2, so sup over an interval sits at an endpoint
  CHECK(pot.psi_sup(0.3, 0.7) == Approx(1.0 / 0.21).epsilon(1e-15));
  CHECK(pot.psi_sup(0.2, 0.5) == Approx(6.25).epsilon(1e-15));
  CHECK(pot.psi_sup(0.4, 0.45) == Approx(1.0 / 0.24).epsilon(1e-15));
  CHECK(pot.b_ext_sup(0.3, 0.7) ==
        Approx(std::abs(pot.b_ext(0.3))).epsilon(1e-15));

  // blow-up growth certificate near both walls
  CHECK(pot.blowup_certificate_holds(1e-2));
  CHECK(pot.blowup_certificate_holds(1e-3));
  CHECK(pot.blowup_certificate_holds(1.0 - 1e-3));

  ExternalPotential off;
  off.form = PotentialForm::Zero;
  CHECK(off.is_zero());
  CHECK(off.psi(0.3) == 0.0);
  CHECK(off.b_ext(0.3) == 0.0);

  CHECK(dist_to_boundary(0.3) == Approx(0.3));
  CHECK(dist_to_boundary(0.7) == Approx(0.3));
  CHECK(dist_to_boundary(0.5) == 0.5);

  double ps, bx;
  CHECK_THROWS_AS(eval_potential(pot, 0.0, ps, bx), std::domain_error);
  CHECK_THROWS_AS(eval_potential(pot, 1.0, ps, bx), std::domain_error);
  CHECK_THROWS_AS(eval_potential(off, -0.1, ps, bx), std::domain_error);
}

TEST_CASE("phase-space grid and velocity tables") {
  PhaseSpaceGrid g(8, 4, 1.0);
  CHECK(g.dx == 0.125);
  CHECK(g.dv == 0.5);
  CHECK(g.dt() == g.dx);
  CHECK(g.x(0) == 0.0);
  CHECK(g.x(8) == 1.0);
  CHECK(g.v(0) == -1.0);
  CHECK(g.v(2) == 0.0);
  CHECK(g.v(4) == 1.0);
  CHECK(g.n_xnodes() == 9);
  CHECK(g.n_vnodes() == 5);

  VelocityTables vt(g);
  // node (j=4, k=2): v = (1, 0) -> vhat = (1/sqrt(2), 0), lorentz sqrt(2)
  CHECK(vt.at_vhat1(4, 2) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(vt.at_vhat2(4, 2) == 0.0);
  CHECK(vt.at_lorentz(4, 2) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  // trapezoid weights: halved ends, total 2*v_max
  CHECK(vt.w[0] == Approx(0.25));
  CHECK(vt.w[1] == Approx(0.5));
  double sum = 0.0;
  for (double w : vt.w) sum += w;
  CHECK(sum == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("catalog configs parse, validate, and round-trip") {
  for (const char* name : {"vacuum.json", "wave.json", "confined_bump.json",
                           "driven.json", "picard_bump.json"}) {
    CAPTURE(name);
    SimConfig cfg = testutil::load_catalog(name);
    CHECK_NOTHROW(validate_config(cfg));
    std::string s1 = serialize_config(cfg);
    SimConfig cfg2 = parse_config_json(s1);
    std::string s2 = serialize_config(cfg2);
    CHECK(s1 == s2);
  }
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("{\"bogus_key\": 1}"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("{\"nx\": \"many\"}"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_json("{\"potential\": {\"form\": \"quadratic\"}}"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config_json("{\"initial_data\": {\"f0\": {\"form\": \"ring\"}}}"),
      ConfigError);
  CHECK_THROWS_AS(parse_config_json("{\"output\": {\"formats\": [\"hdf5\"]}}"),
                  ConfigError);
  // unknown keys are rejected at every nesting level
  CHECK_THROWS_AS(
      parse_config_json("{\"initial_data\": {\"epsilon\": 0.1}}"),
      ConfigError);
}

TEST_CASE("config validation rejects broken hypotheses") {
  // f0 support too close to the wall for the declared eps0
  SimConfig cfg = testutil::small_bump_config();
  cfg.initial_data.f0.x_radius = 0.45;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  // v grid too small for the guaranteed momentum growth k0 + C2*T
  cfg = testutil::small_bump_config();
  cfg.v_max = 0.6;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  // k0 smaller than the declared f0 velocity support
  cfg = testutil::small_bump_config();
  cfg.initial_data.k0 = 0.3;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = testutil::small_bump_config();
  cfg.t_final = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  cfg = testutil::small_bump_config();
  cfg.nx = 0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  // corner compatibility: initial E2 must meet the boundary data at t=0
  cfg = testutil::zero_config();
  cfg.initial_data.E2_0.form = AnalyticForm::Constant;
  cfg.initial_data.E2_0.value = 1.0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  // violations are collected, not short-circuited
  cfg = testutil::small_bump_config();
  cfg.v_max = -1.0;
  cfg.t_final = -1.0;
  auto v = config_violations(cfg);
  CHECK(v.size() >= 2);
}

TEST_CASE("config overrides") {
  SimConfig cfg = testutil::load_catalog("confined_bump.json");
  apply_override(cfg, "nx=256");
  CHECK(cfg.nx == 256);
  apply_override(cfg, "potential.c0=2.5");
  CHECK(cfg.potential.c0 == 2.5);
  apply_override(cfg, "initial_data.f0.amplitude=0.75");
  CHECK(cfg.initial_data.f0.amplitude == 0.75);
  apply_override(cfg, "output.directory=elsewhere");
  CHECK(cfg.output.directory == "elsewhere");
  apply_override(cfg, "solver_mode=picard");
  CHECK(cfg.solver_mode == SolverMode::Picard);
  CHECK_THROWS_AS(apply_override(cfg, "nx"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "no.such.path=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "nx=abc"), ConfigError);
}

TEST_CASE("n_steps ties T to the unit-CFL step") {
  SimConfig cfg = testutil::zero_config(32, 4, 1.0, 0.25);
  CHECK(cfg.n_steps() == 8);
  CHECK(cfg.dt() == cfg.dx());
}

TEST_CASE("L1 norms of the catalog f0 against frozen quadrature oracles") {
  F0Spec f0;
  f0.zero = false;
  f0.x_center = 0.5;
  f0.x_radius = 0.2;
  f0.v_radius = 0.5;

  f0.amplitude = 1.5;
  CHECK(f0_l1_norm(f0) == Approx(testutil::kL1_A15).epsilon(1e-10));
  CHECK(f0_relativistic_l1_norm(f0) ==
        Approx(testutil::kRel_A15).epsilon(1e-10));

  f0.amplitude = 0.6;
  CHECK(f0_l1_norm(f0) == Approx(testutil::kL1_A06).epsilon(1e-10));
  CHECK(f0_relativistic_l1_norm(f0) ==
        Approx(testutil::kRel_A06).epsilon(1e-10));

  F0Spec off;
  CHECK(f0_l1_norm(off) == 0.0);
  CHECK(f0_relativistic_l1_norm(off) == 0.0);
  CHECK(off.sup() == 0.0);
  f0.amplitude = 1.5;
  CHECK(f0.sup() == 1.5);
}

TEST_CASE("theoretical constants: all-zero data") {
  SimConfig cfg = testutil::zero_config();
  TheoreticalConstants tc = theoretical_constants(cfg);
  CHECK(tc.C1 == 0.0);
  CHECK(tc.C2 == 0.0);
  CHECK(tc.C0 == 0.0);
  CHECK(tc.e1_bound == 0.0);
  CHECK(tc.R == cfg.initial_data.k0);
  CHECK(tc.rho_j_bound == 0.0);
}

TEST_CASE("theoretical constants: frozen oracle for the confined catalog") {
  SimConfig cfg = testutil::load_catalog("confined_bump.json");
  TheoreticalConstants tc = theoretical_constants(cfg);
  // 30-digit oracle driven by the frozen L1 norms and the printed formulas
  CHECK(tc.C1 == Approx(0.11314352880465479235).epsilon(1e-12));
  CHECK(tc.C0 == Approx(0.22792990201607636956).epsilon(1e-12));
  CHECK(tc.C2 == Approx(0.91171960806430547825).epsilon(1e-12));
  CHECK(tc.R == Approx(1.4117196080643054783).epsilon(1e-12));
  CHECK(tc.rho_j_bound == Approx(2.9894283776898544097).epsilon(1e-12));
  CHECK(tc.psi_sup_eps0 == Approx(4.7619047619047619048).epsilon(1e-14));
  CHECK(tc.theta0 == Approx(0.10405603001514112805).epsilon(1e-12));
  CHECK(tc.theta1 == Approx(0.064206897459954601595).epsilon(1e-12));
  CHECK(tc.theta1 <= tc.theta0);
  CHECK(tc.theta0 <= cfg.initial_data.eps0);
  CHECK(tc.R <= cfg.v_max);
}

TEST_CASE("theoretical constants: frozen oracle for driven and picard") {
  SimConfig cfg = testutil::load_catalog("driven.json");
  TheoreticalConstants tc = theoretical_constants(cfg);
  CHECK(tc.C1 == Approx(0.27033102880465479235).epsilon(1e-12));
  CHECK(tc.C2 == Approx(1.5404696080643054783).epsilon(1e-12));
  CHECK(tc.R == Approx(1.7034918813002386549).epsilon(1e-12));
  CHECK(tc.theta0 == Approx(0.093961017936462761189).epsilon(1e-12));
  CHECK(tc.R <= cfg.v_max);

  cfg = testutil::load_catalog("picard_bump.json");
  tc = theoretical_constants(cfg);
  CHECK(tc.C1 == Approx(0.024216856833360011274).epsilon(1e-12));
  CHECK(tc.C2 == Approx(0.28052562447171456864).epsilon(1e-12));
  CHECK(tc.R == Approx(0.64026281223585728432).epsilon(1e-12));
  CHECK(tc.theta0 == Approx(0.13875572087157919162).epsilon(1e-12));
  CHECK(tc.theta1 == Approx(0.092481049233160326341).epsilon(1e-12));
  CHECK(tc.R <= cfg.v_max);

  cfg = testutil::load_catalog("wave.json");
  tc = theoretical_constants(cfg);
  CHECK(tc.C1 == Approx(2.25).epsilon(1e-14));
  CHECK(tc.C2 == Approx(9.0).epsilon(1e-14));
  CHECK(tc.R == Approx(4.6).epsilon(1e-14));
}

TEST_CASE("theoretical constants: printed-formula arithmetic") {
  // A descriptor tuned (independent root-find) so that ||f0||_1 = 1 and
  // ||sqrt(1+|v|^2) f0||_1 = 3/2 exactly; with zero field data, lambda = 0,
  // T = 1 the published formulas give C1 = 1 and C2 = 8 on the nose.
  SimConfig cfg;
  cfg.t_final = 1.0;
  cfg.lambda = 0.0;
  cfg.initial_data.f0.zero = false;
  cfg.initial_data.f0.amplitude = 0.63559368337970299174;
  cfg.initial_data.f0.x_center = 0.5;
  cfg.initial_data.f0.x_radius = 0.2;
  cfg.initial_data.f0.v_radius = 2.2671522213979927174;
  cfg.initial_data.k0 = 1.0;
  cfg.initial_data.eps0 = 0.5;  // sup of psi_ext over {1/2} is exactly 4
  cfg.potential.c0 = 1.0;
  cfg.potential.gamma = 1.0;

  TheoreticalConstants tc = theoretical_constants(cfg);
  CHECK(tc.f0_l1 == Approx(1.0).epsilon(1e-10));
  CHECK(tc.f0_rel_l1 == Approx(1.5).epsilon(1e-10));
  CHECK(tc.C1 == Approx(1.0).epsilon(1e-9));
  CHECK(tc.C2 == Approx(8.0).epsilon(1e-9));
  // theta0 = [c0 / (1/c0 + 2 k0 + C1 + 3 C2 T + psi_sup)]^(1/gamma)
  //        = 1 / (1 + 2 + 1 + 24 + 4) = 1/32
  CHECK(tc.psi_sup_eps0 == Approx(4.0).epsilon(1e-14));
  CHECK(tc.theta0 == Approx(1.0 / 32.0).epsilon(1e-9));

  // structural identities of the formulas, on the computed fields
  CHECK(tc.C2 == Approx(4.0 * (tc.f0_l1 + cfg.lambda + tc.C1)).epsilon(1e-15));
  CHECK(tc.C0 == Approx(tc.f0_l1 + cfg.lambda + tc.C1).epsilon(1e-15));
  CHECK(tc.e1_bound == Approx(tc.f0_l1 + cfg.lambda).epsilon(1e-15));
  CHECK(tc.R == Approx(cfg.initial_data.k0 + tc.C2 * cfg.t_final).epsilon(1e-15));
  double denom = 1.0 / cfg.potential.c0 + 2.0 * cfg.initial_data.k0 + tc.C1 +
                 3.0 * tc.C2 * cfg.t_final + tc.psi_sup_eps0;
  CHECK(tc.theta0 == Approx(std::pow(cfg.potential.c0 / denom, 1.0)).epsilon(1e-15));

  // gamma = 2: same argument, exponent becomes 1/2
  cfg.potential.gamma = 2.0;
  TheoreticalConstants tc2 = theoretical_constants(cfg);
  double psi2 = cfg.potential.psi_sup(0.5, 0.5);
  CHECK(psi2 == Approx(16.0).epsilon(1e-14));
  double denom2 = 1.0 / cfg.potential.c0 + 2.0 * cfg.initial_data.k0 + tc2.C1 +
                  3.0 * tc2.C2 * cfg.t_final + psi2;
  CHECK(tc2.theta0 == Approx(std::sqrt(cfg.potential.c0 / denom2)).epsilon(1e-14));
}

TEST_CASE("theoretical constants are a pure function of the config") {
  SimConfig cfg = testutil::load_catalog("confined_bump.json");
  TheoreticalConstants a = theoretical_constants(cfg);
  TheoreticalConstants b = theoretical_constants(cfg);
  CHECK(a.C1 == b.C1);
  CHECK(a.C2 == b.C2);
  CHECK(a.theta0 == b.theta0);
  CHECK(a.theta1 == b.theta1);
  CHECK(a.f0_l1 == b.f0_l1);
}
