#include "rvm/analytic.hpp"

#include <cmath>
#include <cstdlib>

namespace rvm {

double bump_profile(double s) {
  double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double AnalyticFn::operator()(double s) const {
  switch (form) {
    case AnalyticForm::Zero:
      return 0.0;
    case AnalyticForm::Constant:
      return value;
    case AnalyticForm::Cosine:
      return amplitude * std::cos(omega * s + phase);
    case AnalyticForm::GaussianBump:
      return amplitude * bump_profile((s - center) / width);
  }
  return 0.0;
}

double AnalyticFn::sup_norm() const {
  switch (form) {
    case AnalyticForm::Zero:
      return 0.0;
    case AnalyticForm::Constant:
      return std::abs(value);
    case AnalyticForm::Cosine:
      // |cos| attains 1 on any ray once omega != 0; for omega == 0 the
      // function is the constant amplitude*cos(phase), still bounded by |A|.
      // We report |A|: attained for omega != 0, and an exact bound otherwise.
      return std::abs(amplitude);
    case AnalyticForm::GaussianBump:
      return std::abs(amplitude);  // bump peaks at 1
  }
  return 0.0;
}

bool AnalyticFn::is_zero() const {
  switch (form) {
    case AnalyticForm::Zero:
      return true;
    case AnalyticForm::Constant:
      return value == 0.0;
    case AnalyticForm::Cosine:
    case AnalyticForm::GaussianBump:
      return amplitude == 0.0;
  }
  return true;
}

bool AnalyticFn::compact_support(double& lo, double& hi) const {
  if (is_zero()) {
    lo = 0.0;
    hi = -1.0;  // empty
    return true;
  }
  if (form == AnalyticForm::GaussianBump) {
    lo = center - width;
    hi = center + width;
    return true;
  }
  return false;
}

const char* form_name(AnalyticForm f) {
  switch (f) {
    case AnalyticForm::Zero: return "zero";
    case AnalyticForm::Constant: return "constant";
    case AnalyticForm::Cosine: return "cosine";
    case AnalyticForm::GaussianBump: return "gaussian_bump";
  }
  return "zero";
}

bool form_from_name(const std::string& name, AnalyticForm& out) {
  if (name == "zero") { out = AnalyticForm::Zero; return true; }
  if (name == "constant") { out = AnalyticForm::Constant; return true; }
  if (name == "cosine") { out = AnalyticForm::Cosine; return true; }
  if (name == "gaussian_bump") { out = AnalyticForm::GaussianBump; return true; }
  return false;
}

}  // namespace rvm
