#include "rvm/constants.hpp"

#include <algorithm>
#include <cmath>

namespace rvm {

namespace {

// Composite Simpson; n must be even.  The bump integrands are C-infinity
// with all derivatives vanishing at the endpoints, so this converges fast.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

constexpr int kQuadN = 4096;

}  // namespace

double f0_l1_norm(const F0Spec& f0) {
  if (f0.is_zero()) return 0.0;
  double ix = f0.x_radius * simpson([](double s) { return bump_profile(s); },
                                    -1.0, 1.0, kQuadN);
  double iv = 2.0 * M_PI * f0.v_radius * f0.v_radius *
              simpson([](double u) { return bump_profile(u) * u; }, 0.0, 1.0,
                      kQuadN);
  return f0.amplitude * ix * iv;
}

double f0_relativistic_l1_norm(const F0Spec& f0) {
  if (f0.is_zero()) return 0.0;
  double ix = f0.x_radius * simpson([](double s) { return bump_profile(s); },
                                    -1.0, 1.0, kQuadN);
  double rv = f0.v_radius;
  double iv = 2.0 * M_PI * rv * rv *
              simpson(
                  [rv](double u) {
                    return std::sqrt(1.0 + rv * rv * u * u) * bump_profile(u) * u;
                  },
                  0.0, 1.0, kQuadN);
  return f0.amplitude * ix * iv;
}

TheoreticalConstants theoretical_constants(const SimConfig& cfg) {
  TheoreticalConstants c;
  const auto& in = cfg.initial_data;
  const auto& bd = cfg.boundary_data;
  double T = cfg.t_final;

  c.f0_sup = in.f0.sup();
  c.f0_l1 = f0_l1_norm(in.f0);
  c.f0_rel_l1 = f0_relativistic_l1_norm(in.f0);

  double e20 = in.E2_0.sup_norm();
  double b0 = in.B_0.sup_norm();
  double e2b = std::max(bd.E2_b_left.sup_norm(), bd.E2_b_right.sup_norm());
  double bb = std::max(bd.B_b_left.sup_norm(), bd.B_b_right.sup_norm());
  // sup over time and endpoint of |E2_b * B_b|, bounded per endpoint by the
  // product of sups (attained for the catalog's matched-phase cosines).
  double e2b_bb = std::max(bd.E2_b_left.sup_norm() * bd.B_b_left.sup_norm(),
                           bd.E2_b_right.sup_norm() * bd.B_b_right.sup_norm());

  c.e1_bound = c.f0_l1 + cfg.lambda;
  c.C1 = e20 + e2b + b0 + bb +
         0.25 * (c.e1_bound * c.e1_bound + e20 * e20 + b0 * b0 + 4.0 * T * e2b_bb) +
         0.5 * c.f0_rel_l1;
  c.C0 = c.f0_l1 + cfg.lambda + c.C1;
  c.C2 = 4.0 * (c.f0_l1 + cfg.lambda + c.C1);
  c.R = in.k0 + c.C2 * T;
  c.rho_j_bound = c.f0_sup * c.R * c.R;

  const auto& pot = cfg.potential;
  if (!pot.is_zero()) {
    c.psi_sup_eps0 = pot.psi_sup(in.eps0, 1.0 - in.eps0);
    double denom0 = 1.0 / pot.c0 + 2.0 * in.k0 + c.C1 + 3.0 * c.C2 * T + c.psi_sup_eps0;
    c.theta0 = std::pow(pot.c0 / denom0, 1.0 / pot.gamma);
    double psi_sup_theta0 = pot.psi_sup(c.theta0, 1.0 - c.theta0);
    double denom1 = 1.0 / pot.c0 + 2.0 * in.k0 + c.C1 + 3.0 * c.C2 * T + psi_sup_theta0;
    c.theta1 = std::pow(pot.c0 / denom1, 1.0 / pot.gamma);
  }
  return c;
}

}  // namespace rvm
