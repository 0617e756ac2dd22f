#pragma once

#include <vector>

#include "rvm/field.hpp"
#include "rvm/potential.hpp"

namespace rvm {

// Space-time evaluator over a sequence of stored field states with uniform
// time spacing.  Interpolation is bilinear: blend the two bracketing time
// levels per x node first, then lerp in x — the stage-cached fast path in
// the transport kernel reproduces this order bit-for-bit.  Time queries
// outside the stored range clamp to the end levels (used deliberately by
// the frozen-field predictor, which passes a single level).
struct FieldSampler {
  const std::vector<FieldState>* levels = nullptr;  // non-owning
  const ExternalPotential* pot = nullptr;
  double t0 = 0.0;     // time of levels->front()
  double dt_lev = 0.0; // spacing between levels (grid dt)
  double dx = 0.0;
  int nx = 0;

  FieldSampler(const std::vector<FieldState>& lv, const ExternalPotential& p,
               double dt_levels);

  // internal-field values (E1, E2, B) at (s, y); B_ext not included.
  void fetch(double s, double y, double& e1, double& e2, double& b) const;

  // nodal time blend shared with the stage cache: value at x node i, time s.
  void blend_nodes(double s, int i, double& e1, double& e2, double& b) const;

  // psi(s, x) = integral of B(s, z) dz from 1/2 to x: cumulative trapezoid
  // from the node nearest 1/2 plus linear end corrections.
  double psi(double s, double x) const;

  double e2_mid(double s) const { double a, b, c; fetch(s, 0.5, a, b, c); return b; }
  double dt_grid() const { return dx; }
};

}  // namespace rvm
