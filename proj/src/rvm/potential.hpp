#pragma once

namespace rvm {

// External confining magnetic field, given through its potential psi_ext so
// that B_ext = d/dx psi_ext.  The reciprocal form
//     psi_ext(x) = c0 / (x(1-x))^gamma
// diverges at both walls fast enough to reflect every particle; the zero
// form turns confinement off (free plasma) for cross-checks.
enum class PotentialForm { Reciprocal, Zero };

struct ExternalPotential {
  PotentialForm form = PotentialForm::Reciprocal;
  double c0 = 1.0;
  double gamma = 1.0;
  // When true the run asserts the confinement certificate; the reciprocal
  // form satisfies the required growth condition for any c0, gamma > 0.
  bool enforce_blowup = true;

  double psi(double x) const;
  double b_ext(double x) const;
  void eval(double x, double& psi_out, double& b_ext_out) const;

  // sup of psi over [a, b] (0 < a <= b < 1).  Catalog forms are monotone on
  // each side of x = 1/2, so the sup sits at an endpoint.
  double psi_sup(double a, double b) const;
  // sup of |b_ext| over [a, b]; same endpoint argument.
  double b_ext_sup(double a, double b) const;

  bool is_zero() const { return form == PotentialForm::Zero; }
  // Growth certificate psi_ext(x) >= c0/dist(x)^gamma - 1/c0 at one point.
  bool blowup_certificate_holds(double x) const;
};

// eval_potential(pot, x): domain error unless x strictly inside (0, 1).
void eval_potential(const ExternalPotential& pot, double x, double& psi_out,
                    double& b_ext_out);

double dist_to_boundary(double x);

}  // namespace rvm
