#pragma once

#include "rvm/config.hpp"

namespace rvm {

// A-priori constants driving every runtime bound check.  All formulas follow
// the continuum estimates; the integrals of f0 are evaluated by high-order
// quadrature independent of the phase-space grid.
struct TheoreticalConstants {
  double f0_l1 = 0.0;      // ||f0||_L1(dx dv)
  double f0_rel_l1 = 0.0;  // || sqrt(1+|v|^2) f0 ||_L1
  double f0_sup = 0.0;     // ||f0||_inf (analytic)
  double e1_bound = 0.0;   // ||f0||_1 + lambda
  double C1 = 0.0;         // field bound: ||E2||, ||B|| <= C1
  double C0 = 0.0;         // ||f0||_1 + lambda + C1
  double C2 = 0.0;         // momentum growth rate: P(t) <= k0 + C2 t
  double R = 0.0;          // k0 + C2 * t_final
  double rho_j_bound = 0.0;  // ||f0||_inf * R^2
  double psi_sup_eps0 = 0.0; // sup psi_ext on [eps0, 1-eps0]
  double theta0 = 0.0;     // dist(supp_x f(t), walls) >= theta0 on [0, t_final]
  double theta1 = 0.0;     // refined bound, psi taken on [theta0, 1-theta0]
};

TheoreticalConstants theoretical_constants(const SimConfig& cfg);

// L1 norms of the catalog f0 by quadrature (grid-independent).
double f0_l1_norm(const F0Spec& f0);
double f0_relativistic_l1_norm(const F0Spec& f0);

}  // namespace rvm
