#include "rvm/grid.hpp"

#include <cmath>

namespace rvm {

VelocityTables::VelocityTables(const PhaseSpaceGrid& g) {
  int n = g.n_vnodes();
  stride = n;
  vhat1.resize(size_t(n) * n);
  vhat2.resize(size_t(n) * n);
  lorentz.resize(size_t(n) * n);
  for (int j = 0; j < n; ++j) {
    double v1 = g.v(j);
    for (int k = 0; k < n; ++k) {
      double v2 = g.v(k);
      double gam = std::sqrt(1.0 + v1 * v1 + v2 * v2);
      size_t id = size_t(j) * n + k;
      lorentz[id] = gam;
      vhat1[id] = v1 / gam;
      vhat2[id] = v2 / gam;
    }
  }
  w.assign(n, g.dv);
  w[0] = 0.5 * g.dv;
  w[n - 1] = 0.5 * g.dv;
}

}  // namespace rvm
