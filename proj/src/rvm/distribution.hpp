#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "rvm/config.hpp"
#include "rvm/grid.hpp"

namespace rvm {

// Analytic support envelope carried with the state.  The exact solution
// vanishes for |v| > k0 + c2*t, and under a blow-up potential for
// dist(x, walls) < theta(t); the transport kernel clips to the envelope, so
// interpolation halos can never widen the recorded support beyond the proven
// one (reading zero there is exact).  Defaults are inactive (infinite), which
// hand-built states keep.
struct SupportEnvelope {
  double k0 = std::numeric_limits<double>::infinity();
  double c2 = 0.0;                   // momentum radius k0 + c2 * t
  bool confine_x = false;            // x envelope active (blow-up potential)
  double c0 = 1.0, inv_gamma = 1.0;  // theta(t) = (c0 / (a + b t))^(1/gamma)
  double a = 1.0, b = 0.0;

  double v_radius(double t) const { return k0 + c2 * t; }
  double theta(double t) const {
    return std::pow(c0 / (a + b * t), inv_gamma);
  }
};

// Distribution function on the tensor grid at one time level, with exact
// (tolerance-zero) support metadata maintained so the transport kernel can
// skip the vacuum region.  Values are identically zero outside the recorded
// support by construction.
struct DistributionState {
  double t = 0.0;
  int nx = 0, nv = 0;
  std::vector<double> values;  // (nx+1)*(nv+1)^2, row-major (i, j, k)

  int sx_lo = 1, sx_hi = 0;    // x-node range with any nonzero value; lo > hi = empty
  double v_radius = 0.0;       // max node |v| over nonzero values
  double max_value = 0.0;
  double min_value = 0.0;
  SupportEnvelope env;

  size_t idx(int i, int j, int k) const {
    return (size_t(i) * (nv + 1) + j) * (nv + 1) + k;
  }
  double at(int i, int j, int k) const { return values[idx(i, j, k)]; }
  bool empty_support() const { return sx_lo > sx_hi; }
};

DistributionState initial_distribution(const SimConfig& cfg,
                                       const PhaseSpaceGrid& g);

// Recomputes the metadata from the values (strictly nonzero entries).
void refresh_support(DistributionState& f, const PhaseSpaceGrid& g);

// Support measured with a tolerance: nodes with |f| > tol.
struct SupportExtents {
  bool empty = true;
  double x_lo = 0.0, x_hi = 0.0;  // node positions
  double v_radius = 0.0;          // max node |v|
};
SupportExtents support_extents(const DistributionState& f,
                               const PhaseSpaceGrid& g, double tol);

}  // namespace rvm
