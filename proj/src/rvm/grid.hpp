#pragma once

#include <vector>

namespace rvm {

// Uniform tensor grid on [0,1] x [-v_max, v_max]^2.  Node counts are
// nx+1 and (nv+1) per velocity axis; dt is tied to dx by the unit-CFL
// field march, so the grid owns the time step too.
struct PhaseSpaceGrid {
  int nx = 0;
  int nv = 0;
  double v_max = 0.0;
  double dx = 0.0;
  double dv = 0.0;

  PhaseSpaceGrid() = default;
  PhaseSpaceGrid(int nx_, int nv_, double v_max_)
      : nx(nx_), nv(nv_), v_max(v_max_), dx(1.0 / nx_),
        dv(2.0 * v_max_ / nv_) {}

  double x(int i) const { return i * dx; }
  double v(int j) const { return -v_max + j * dv; }
  double dt() const { return dx; }
  int n_xnodes() const { return nx + 1; }
  int n_vnodes() const { return nv + 1; }
};

// Velocity-grid lookup tables shared by the transport and moment loops:
// vhat = v/sqrt(1+|v|^2) and the Lorentz factor, tabulated per (j,k) node,
// plus 1D trapezoid weights.
struct VelocityTables {
  std::vector<double> vhat1, vhat2, lorentz;  // (nv+1)^2, row-major (j,k)
  std::vector<double> w;                      // nv+1 trapezoid weights (*dv)

  explicit VelocityTables(const PhaseSpaceGrid& g);
  int stride = 0;
  double at_vhat1(int j, int k) const { return vhat1[j * stride + k]; }
  double at_vhat2(int j, int k) const { return vhat2[j * stride + k]; }
  double at_lorentz(int j, int k) const { return lorentz[j * stride + k]; }
};

}  // namespace rvm
