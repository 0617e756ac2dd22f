#pragma once

#include <functional>
#include <vector>

#include "rvm/config.hpp"

namespace rvm {

// Electromagnetic state on the x grid at one time level.  The transverse
// field is carried in null coordinates k± = E2 ± B so the unit-CFL march is
// an exact shift; E2 and B are recovered pointwise.
struct FieldState {
  double t = 0.0;
  std::vector<double> e1;       // nx+1
  std::vector<double> k_plus;   // nx+1, E2 + B
  std::vector<double> k_minus;  // nx+1, E2 - B

  int nx() const { return int(e1.size()) - 1; }
  double e2(int i) const { return 0.5 * (k_plus[i] + k_minus[i]); }
  double b(int i) const { return 0.5 * (k_plus[i] - k_minus[i]); }
};

// Velocity moments of f on the x grid at one time level.
struct CurrentSlice {
  double t = 0.0;
  std::vector<double> rho, j1, j2;  // nx+1 each
};

// E1(x_i) = integral of rho from 0 to x_i (composite trapezoid) + lambda.
// E1(0) = lambda exactly.
std::vector<double> compute_e1(const std::vector<double>& rho, double lambda,
                               double dx);

// Retarded times for the left half of the slab (0 < x <= 1/2):
// t_plus = 0 if t <= x else t - x; t_minus = 0 if t <= 1-x else t - 1 + x.
void retarded_times(double t, double x, double& t_plus, double& t_minus);

FieldState initial_field_state(const SimConfig& cfg);

// One unit-CFL step t -> t + dx.  k+ shifts right, k- shifts left, each with
// a trapezoid source from the two j2 levels along the characteristic; the
// incoming combinations at the walls are injected from boundary data at the
// new time.  e1 is recomputed from slice_next.rho.  Outgoing wall values
// (k- at x=0, k+ at x=1) are the marched traces; for trace-consistent data
// they coincide with the boundary data.
FieldState step_fields(const FieldState& state, const CurrentSlice& slice_t,
                       const CurrentSlice& slice_next,
                       const BoundaryDataSpec& boundary, double lambda,
                       double t_final);

// Uniform-in-time archive of current slices (levels m*dt) with bilinear
// space-time evaluation of j2, used by the closed-form field representation.
struct CurrentArchive {
  double dt = 0.0;
  double dx = 0.0;
  const std::vector<CurrentSlice>* slices = nullptr;  // non-owning

  double j2_at(double tau, double y) const;
  bool empty() const { return !slices || slices->empty(); }
};

// Closed-form representation of (E2, B) at one space-time point from initial
// data, boundary data, and the j2 history: the reference path cross-checking
// the march.  x > 1/2 is handled by the mirrored formulas.
void solve_e2_b_direct(double t, double x, const SimConfig& cfg,
                       const CurrentArchive& j2, double& E2, double& B);

namespace detail {
// Unmirrored evaluator, valid for x in (0, 1/2]; exposed for the x = 1/2
// mirror-agreement test and for wall-node evaluation in the fixed-point
// solver (the representation extends continuously to x in [0,1]).
void solve_direct_halfline(double t, double x,
                           const std::function<double(double)>& kp0,
                           const std::function<double(double)>& km0,
                           const std::function<double(double)>& kp_in,
                           const std::function<double(double)>& km_in,
                           const std::function<double(double, double)>& j2,
                           double dt_quad, double& kp, double& km);
// Full-domain evaluation without the x-range guard (walls allowed).
void solve_direct_any(double t, double x, const SimConfig& cfg,
                      const CurrentArchive& j2, double& E2, double& B);
}  // namespace detail

}  // namespace rvm
