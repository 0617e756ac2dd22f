#pragma once

#include <string>

namespace rvm {

// Closed-form scalar profiles used for initial and boundary data.  Keeping a
// fixed catalog means every run is reproducible from its config file alone
// and sup norms are available exactly rather than by sampling.
enum class AnalyticForm { Zero, Constant, Cosine, GaussianBump };

// C-infinity bump: exp(1 - 1/(1-s^2)) for |s| < 1, zero outside.
// Peak value 1 at s = 0, compactly supported in [-1, 1].
double bump_profile(double s);

struct AnalyticFn {
  AnalyticForm form = AnalyticForm::Zero;
  double value = 0.0;      // constant
  double amplitude = 0.0;  // cosine / gaussian_bump
  double omega = 0.0;      // cosine: amplitude * cos(omega*s + phase)
  double phase = 0.0;
  double center = 0.0;     // gaussian_bump: amplitude * bump((s-center)/width)
  double width = 1.0;

  double operator()(double s) const;
  // Sup over the whole real line; attained (not just an upper bound).
  double sup_norm() const;
  bool is_zero() const;
  // True if the profile vanishes outside [lo, hi].
  bool compact_support(double& lo, double& hi) const;
};

const char* form_name(AnalyticForm f);
bool form_from_name(const std::string& name, AnalyticForm& out);

}  // namespace rvm
