#pragma once

#include <cmath>
#include <vector>

#include "rvm/potential.hpp"
#include "rvm/sampler.hpp"

namespace rvm {

struct PhasePoint {
  double x = 0.0, v1 = 0.0, v2 = 0.0;
};

struct Deriv {
  double dx = 0.0, dv1 = 0.0, dv2 = 0.0;
};

inline void v_hat(double v1, double v2, double& h1, double& h2) {
  double g = std::sqrt(1.0 + v1 * v1 + v2 * v2);
  h1 = v1 / g;
  h2 = v2 / g;
}

// Characteristic right-hand side (dX/ds, dV/ds) given raw field values;
// shared verbatim by the sampler path and the transport stage cache so both
// produce identical arithmetic.
inline Deriv force_eval(double e1, double e2, double b, double b_ext,
                        double v1, double v2) {
  double h1, h2;
  v_hat(v1, v2, h1, h2);
  double bc = b + b_ext;
  return {h1, e1 + h2 * bc, e2 - h1 * bc};
}

Deriv characteristic_rhs(double s, const PhasePoint& p, const FieldSampler& fields);

// One classical RK4 step of size h from (s, p); rhs(s, p) -> Deriv.
template <class RHS>
inline PhasePoint rk4_step(const PhasePoint& p, double s, double h, RHS&& rhs) {
  Deriv k1 = rhs(s, p);
  PhasePoint p2{p.x + 0.5 * h * k1.dx, p.v1 + 0.5 * h * k1.dv1, p.v2 + 0.5 * h * k1.dv2};
  Deriv k2 = rhs(s + 0.5 * h, p2);
  PhasePoint p3{p.x + 0.5 * h * k2.dx, p.v1 + 0.5 * h * k2.dv1, p.v2 + 0.5 * h * k2.dv2};
  Deriv k3 = rhs(s + 0.5 * h, p3);
  PhasePoint p4{p.x + h * k3.dx, p.v1 + h * k3.dv1, p.v2 + h * k3.dv2};
  Deriv k4 = rhs(s + h, p4);
  return {p.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          p.v1 + h / 6.0 * (k1.dv1 + 2.0 * k2.dv1 + 2.0 * k3.dv1 + k4.dv1),
          p.v2 + h / 6.0 * (k1.dv2 + 2.0 * k2.dv2 + 2.0 * k3.dv2 + k4.dv2)};
}

struct TraceSample {
  double s, x, v1, v2;
};

// Integrates the characteristic through (t, p) backward or forward to
// s_target with fixed RK4 substep dt/4 (dt from the sampler's grid).  The
// trajectory must stay strictly inside (0,1); leaving it throws
// ConfinementError carrying the samples collected so far.
PhasePoint trace(double t, const PhasePoint& p, const FieldSampler& fields,
                 double s_target, std::vector<TraceSample>* recorder = nullptr);

// Generalized transverse momentum p = v2 + psi(s,x) + psi_ext(x).
double p_invariant(double s, const PhasePoint& p, const FieldSampler& fields);

// Certified lower bound on dist(X(s), boundary) for |s - t| <= alpha given
// field bounds |E| <= C0, |B| <= C0p and the anchor point (x, v):
//   [c0 / (1/c0 + 2|v| + C0p + 3 C0 alpha + |psi_ext(x)|)]^(1/gamma).
double confinement_bound(double x, double v1, double v2, double alpha,
                         double C0, double C0p, const ExternalPotential& pot);

}  // namespace rvm
