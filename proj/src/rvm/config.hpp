#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rvm/analytic.hpp"
#include "rvm/potential.hpp"

namespace rvm {

// Initial particle density: separable compactly supported product
//   f0(x,v) = A * bump((x-x_center)/x_radius) * bump(|v|/v_radius),
// or identically zero.  The sup is A (both factors peak at 1 together).
struct F0Spec {
  bool zero = true;
  double amplitude = 0.0;
  double x_center = 0.5;
  double x_radius = 0.1;
  double v_radius = 0.5;

  double operator()(double x, double v1, double v2) const {
    if (zero || amplitude == 0.0) return 0.0;
    double bx = bump_profile((x - x_center) / x_radius);
    if (bx == 0.0) return 0.0;
    double r = std::sqrt(v1 * v1 + v2 * v2);
    return amplitude * bx * bump_profile(r / v_radius);
  }
  double sup() const { return zero ? 0.0 : std::abs(amplitude); }
  bool is_zero() const { return zero || amplitude == 0.0; }
};

struct InitialDataSpec {
  F0Spec f0;
  double eps0 = 0.1;  // dist(supp_x f0, walls) >= eps0
  double k0 = 0.5;    // supp_v f0 inside |v| <= k0
  AnalyticFn E2_0;
  AnalyticFn B_0;
};

struct BoundaryDataSpec {
  AnalyticFn E2_b_left, E2_b_right;
  AnalyticFn B_b_left, B_b_right;
};

// Incoming null combinations actually consumed by the field solvers.
inline double inflow_kplus(const BoundaryDataSpec& b, double t) {
  return b.E2_b_left(t) + b.B_b_left(t);
}
inline double inflow_kminus(const BoundaryDataSpec& b, double t) {
  return b.E2_b_right(t) - b.B_b_right(t);
}

struct OutputSpec {
  std::string directory = "out";
  int snapshot_stride = 1;
  bool fmt_csv = true;
  bool fmt_json = false;
  bool fmt_binary = true;
  bool emit_trajectories = false;
};

enum class SolverMode { March, Picard };

struct SimConfig {
  int nx = 64;
  int nv = 32;
  double v_max = 1.0;
  double t_final = 1.0;
  double lambda = 0.0;  // E1(t, 0)
  ExternalPotential potential;
  InitialDataSpec initial_data;
  BoundaryDataSpec boundary_data;
  SolverMode solver_mode = SolverMode::March;
  double picard_tol = 1e-8;
  int picard_max_iter = 25;
  OutputSpec output;
  // Resolution-scaled slack for a-priori bound checks:
  // allowed overshoot = diag_allowance * (dx^2 + dv^2).
  double diag_allowance = 50.0;

  double dx() const { return 1.0 / nx; }
  double dt() const { return 1.0 / nx; }
  int n_steps() const { return int(std::lround(t_final * nx)); }
};

// Validates ranges, the blow-up growth condition, corner compatibility of
// initial and boundary field data, and support hypotheses.  Throws
// ConfigError listing every violation.
void validate_config(const SimConfig& cfg);

// Same checks, but collecting messages instead of throwing.
std::vector<std::string> config_violations(const SimConfig& cfg);

// JSON round-trip.  Parsing rejects unknown keys so typos cannot silently
// fall back to defaults.  serialize_config(parse_config_json(s)) is
// canonical: sorted keys, 17 significant digits.
SimConfig parse_config_json(const std::string& text);
std::string serialize_config(const SimConfig& cfg);

// Applies one "dotted.path=value" override (CLI --set).  Throws ConfigError
// on unknown paths or unparsable values.
void apply_override(SimConfig& cfg, const std::string& assignment);

}  // namespace rvm
