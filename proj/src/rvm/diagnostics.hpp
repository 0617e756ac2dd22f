#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rvm/constants.hpp"
#include "rvm/distribution.hpp"
#include "rvm/field.hpp"
#include "rvm/grid.hpp"

namespace rvm {

struct DiagnosticsReport {
  double t = 0.0;
  double total_charge = 0.0;
  double total_energy = 0.0;
  double boundary_flux_accum = 0.0;
  double max_f = 0.0;
  double e1_max = 0.0, e2_max = 0.0, b_max = 0.0;
  double p_radius = 0.0;              // measured v-support radius
  double sigma_lo = 0.0, sigma_hi = 0.0;  // measured x-support interval
  bool sigma_empty = true;
  std::vector<std::pair<std::string, double>> violations;  // name, margin
};

struct SimulationRun;  // driver.hpp

// e = (E1^2 + E2^2 + B^2)/2 + int sqrt(1+|v|^2) f dv,
// m = -int v1 f dv - E2*B, both per x node (trapezoid in v).
void energy_density(const FieldState& field, const DistributionState& f,
                    const PhaseSpaceGrid& g, const VelocityTables& vt,
                    std::vector<double>& e_out, std::vector<double>& m_out);

// Trapezoid integral over [0,1] of a node array.
double integrate_x(const std::vector<double>& a, double dx);

// |E(t) - E(0) - accumulated boundary flux| / max(1, |E(0) + flux|).
double check_energy_balance(const SimulationRun& run, int t_index);

// Cone estimate at (t_index*dt, x), x in (0, 1/2]: returns (lhs, rhs).
std::pair<double, double> check_cone_estimate(const SimulationRun& run,
                                              int t_index, double x);

// Evaluates every tracked bound at one stored time level; f must be the
// distribution at that level.  Slack: relative 1e-8 plus the config's
// diag_allowance * (dx^2 + dv^2).
DiagnosticsReport check_all(const SimulationRun& run, int t_index,
                            const DistributionState& f);

}  // namespace rvm
