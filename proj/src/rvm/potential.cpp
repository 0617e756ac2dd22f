#include "rvm/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rvm {

static void require_interior(double x) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("potential evaluated outside (0,1)");
}

double ExternalPotential::psi(double x) const {
  require_interior(x);
  if (form == PotentialForm::Zero) return 0.0;
  double w = x * (1.0 - x);
  if (gamma == 1.0) return c0 / w;
  return c0 / std::pow(w, gamma);
}

double ExternalPotential::b_ext(double x) const {
  require_interior(x);
  if (form == PotentialForm::Zero) return 0.0;
  double w = x * (1.0 - x);
  // d/dx c0 w^-gamma = -gamma c0 w^-(gamma+1) (1-2x) = gamma c0 (2x-1)/w^(gamma+1)
  if (gamma == 1.0) return c0 * (2.0 * x - 1.0) / (w * w);
  return c0 * gamma * (2.0 * x - 1.0) / std::pow(w, gamma + 1.0);
}

void ExternalPotential::eval(double x, double& psi_out, double& b_ext_out) const {
  require_interior(x);
  if (form == PotentialForm::Zero) {
    psi_out = 0.0;
    b_ext_out = 0.0;
    return;
  }
  double w = x * (1.0 - x);
  double wg = (gamma == 1.0) ? w : std::pow(w, gamma);
  psi_out = c0 / wg;
  b_ext_out = gamma * (2.0 * x - 1.0) * psi_out / w;
}

double ExternalPotential::psi_sup(double a, double b) const {
  if (form == PotentialForm::Zero) return 0.0;
  // psi is decreasing on (0,1/2], increasing on [1/2,1): endpoint max.
  return std::max(psi(a), psi(b));
}

double ExternalPotential::b_ext_sup(double a, double b) const {
  if (form == PotentialForm::Zero) return 0.0;
  // |b_ext| = gamma c0 |1-2x| / (x(1-x))^(gamma+1): the numerator decreases
  // and the denominator increases toward 1/2 on each half, so |b_ext| is
  // monotone from each wall toward the center and the max is at an endpoint.
  return std::max(std::abs(b_ext(a)), std::abs(b_ext(b)));
}

bool ExternalPotential::blowup_certificate_holds(double x) const {
  if (form == PotentialForm::Zero) return false;
  double lhs = std::abs(psi(x));
  double rhs = c0 / std::pow(dist_to_boundary(x), gamma) - 1.0 / c0;
  return lhs >= rhs;
}

void eval_potential(const ExternalPotential& pot, double x, double& psi_out,
                    double& b_ext_out) {
  pot.eval(x, psi_out, b_ext_out);
}

double dist_to_boundary(double x) { return std::min(x, 1.0 - x); }

}  // namespace rvm
