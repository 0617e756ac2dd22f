#include "rvm/distribution.hpp"

#include <cmath>

#include "rvm/constants.hpp"

namespace rvm {

DistributionState initial_distribution(const SimConfig& cfg,
                                       const PhaseSpaceGrid& g) {
  DistributionState f;
  f.t = 0.0;
  f.nx = g.nx;
  f.nv = g.nv;
  f.values.assign(size_t(g.nx + 1) * (g.nv + 1) * (g.nv + 1), 0.0);
  const F0Spec& f0 = cfg.initial_data.f0;
  if (!f0.is_zero()) {
    for (int i = 0; i <= g.nx; ++i) {
      double x = g.x(i);
      if (bump_profile((x - f0.x_center) / f0.x_radius) == 0.0) continue;
      for (int j = 0; j <= g.nv; ++j)
        for (int k = 0; k <= g.nv; ++k)
          f.values[f.idx(i, j, k)] = f0(x, g.v(j), g.v(k));
    }
  }

  TheoreticalConstants tc = theoretical_constants(cfg);
  f.env.k0 = cfg.initial_data.k0;
  f.env.c2 = tc.C2;
  f.env.confine_x = cfg.potential.enforce_blowup && cfg.potential.gamma > 0.0;
  if (f.env.confine_x) {
    f.env.c0 = cfg.potential.c0;
    f.env.inv_gamma = 1.0 / cfg.potential.gamma;
    f.env.a = 1.0 / cfg.potential.c0 + 2.0 * cfg.initial_data.k0 + tc.C1 +
              tc.psi_sup_eps0;
    f.env.b = 3.0 * tc.C2;
  }

  refresh_support(f, g);
  return f;
}

void refresh_support(DistributionState& f, const PhaseSpaceGrid& g) {
  f.sx_lo = f.nx + 1;
  f.sx_hi = -1;
  f.v_radius = 0.0;
  f.max_value = 0.0;
  f.min_value = 0.0;
  double vr2 = 0.0;
  for (int i = 0; i <= f.nx; ++i) {
    bool row_nonzero = false;
    for (int j = 0; j <= f.nv; ++j) {
      double vj = g.v(j);
      for (int k = 0; k <= f.nv; ++k) {
        double val = f.values[f.idx(i, j, k)];
        if (val == 0.0) continue;
        row_nonzero = true;
        if (val > f.max_value) f.max_value = val;
        if (val < f.min_value) f.min_value = val;
        double vk = g.v(k);
        double r2 = vj * vj + vk * vk;
        if (r2 > vr2) vr2 = r2;
      }
    }
    if (row_nonzero) {
      if (i < f.sx_lo) f.sx_lo = i;
      f.sx_hi = i;
    }
  }
  if (f.sx_hi < f.sx_lo) {
    f.sx_lo = 1;
    f.sx_hi = 0;
  }
  f.v_radius = std::sqrt(vr2);
}

SupportExtents support_extents(const DistributionState& f,
                               const PhaseSpaceGrid& g, double tol) {
  SupportExtents s;
  double vr2 = 0.0;
  int lo = f.nx + 1, hi = -1;
  for (int i = 0; i <= f.nx; ++i) {
    for (int j = 0; j <= f.nv; ++j) {
      double vj = g.v(j);
      for (int k = 0; k <= f.nv; ++k) {
        double val = f.values[f.idx(i, j, k)];
        if (std::abs(val) <= tol) continue;
        if (i < lo) lo = i;
        if (i > hi) hi = i;
        double vk = g.v(k);
        double r2 = vj * vj + vk * vk;
        if (r2 > vr2) vr2 = r2;
      }
    }
  }
  if (hi >= lo) {
    s.empty = false;
    s.x_lo = g.x(lo);
    s.x_hi = g.x(hi);
    s.v_radius = std::sqrt(vr2);
  }
  return s;
}

}  // namespace rvm
