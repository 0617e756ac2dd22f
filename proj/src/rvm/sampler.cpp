#include "rvm/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace rvm {

FieldSampler::FieldSampler(const std::vector<FieldState>& lv,
                           const ExternalPotential& p, double dt_levels)
    : levels(&lv), pot(&p), dt_lev(dt_levels) {
  if (lv.empty()) throw std::invalid_argument("FieldSampler: no levels");
  t0 = lv.front().t;
  nx = lv.front().nx();
  dx = 1.0 / nx;
}

void FieldSampler::blend_nodes(double s, int i, double& e1, double& e2,
                               double& b) const {
  const auto& lv = *levels;
  int last = int(lv.size()) - 1;
  if (last == 0 || dt_lev <= 0.0) {
    const FieldState& f = lv[0];
    e1 = f.e1[i];
    e2 = f.e2(i);
    b = f.b(i);
    return;
  }
  double a = (s - t0) / dt_lev;
  int m = int(std::floor(a));
  if (m < 0) m = 0;
  if (m > last - 1) m = last - 1;
  double th = a - m;
  if (th < 0.0) th = 0.0;
  if (th > 1.0) th = 1.0;
  const FieldState& lo = lv[m];
  const FieldState& hi = lv[m + 1];
  e1 = (1.0 - th) * lo.e1[i] + th * hi.e1[i];
  e2 = (1.0 - th) * lo.e2(i) + th * hi.e2(i);
  b = (1.0 - th) * lo.b(i) + th * hi.b(i);
}

void FieldSampler::fetch(double s, double y, double& e1, double& e2,
                         double& b) const {
  double a = y / dx;
  int i = int(std::floor(a));
  if (i < 0) i = 0;
  if (i > nx - 1) i = nx - 1;
  double w = a - i;
  if (w < 0.0) w = 0.0;
  if (w > 1.0) w = 1.0;
  double e1l, e2l, bl, e1h, e2h, bh;
  blend_nodes(s, i, e1l, e2l, bl);
  blend_nodes(s, i + 1, e1h, e2h, bh);
  e1 = (1.0 - w) * e1l + w * e1h;
  e2 = (1.0 - w) * e2l + w * e2h;
  b = (1.0 - w) * bl + w * bh;
}

double FieldSampler::psi(double s, double x) const {
  // anchor node nearest 1/2 (exactly 1/2 for even nx)
  int ih = int(std::lround(0.5 / dx));
  if (ih < 0) ih = 0;
  if (ih > nx) ih = nx;
  double xh = ih * dx;

  auto b_node = [&](int i) {
    double e1, e2, b;
    blend_nodes(s, i, e1, e2, b);
    return b;
  };
  auto b_point = [&](double y) {
    double e1, e2, b;
    fetch(s, y, e1, e2, b);
    return b;
  };

  double a = x / dx;
  int i = int(std::floor(a));
  if (i < 0) i = 0;
  if (i > nx - 1) i = nx - 1;

  // cumulative trapezoid between the anchor node and the node at/below x
  double acc = 0.0;
  if (i >= ih) {
    for (int k = ih; k < i; ++k) acc += 0.5 * dx * (b_node(k) + b_node(k + 1));
  } else {
    for (int k = i; k < ih; ++k) acc -= 0.5 * dx * (b_node(k) + b_node(k + 1));
  }
  // linear correction from node i to x
  double xi = i * dx;
  acc += 0.5 * (x - xi) * (b_node(i) + b_point(x));
  // correction for an anchor node off exact 1/2 (odd nx)
  if (xh != 0.5) acc += 0.5 * (xh - 0.5) * (b_point(0.5) + b_node(ih));
  return acc;
}

}  // namespace rvm
