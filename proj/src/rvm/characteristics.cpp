#include "rvm/characteristics.hpp"

#include <cmath>
#include <sstream>

#include "rvm/errors.hpp"

namespace rvm {

Deriv characteristic_rhs(double s, const PhasePoint& p,
                         const FieldSampler& fields) {
  double e1, e2, b;
  fields.fetch(s, p.x, e1, e2, b);
  double b_ext = fields.pot->b_ext(p.x);  // throws domain_error off (0,1)
  return force_eval(e1, e2, b, b_ext, p.v1, p.v2);
}

namespace {

PhasePoint trace_impl(double t, const PhasePoint& p, const FieldSampler& fields,
                      double s_target, std::vector<TraceSample>* recorder,
                      bool& left_domain, double& s_fail) {
  double h_base = fields.dt_grid() / 4.0;
  double span = s_target - t;
  int n_full = int(std::floor(std::abs(span) / h_base + 1e-12));
  double rem = std::abs(span) - n_full * h_base;
  if (rem < 1e-14) rem = 0.0;
  double dir = (span >= 0.0) ? 1.0 : -1.0;

  auto rhs = [&fields](double s, const PhasePoint& q) {
    return characteristic_rhs(s, q, fields);
  };

  PhasePoint cur = p;
  double s = t;
  if (recorder) recorder->push_back({s, cur.x, cur.v1, cur.v2});
  left_domain = false;

  int total = n_full + (rem > 0.0 ? 1 : 0);
  for (int k = 0; k < total; ++k) {
    double h = dir * ((k < n_full) ? h_base : rem);
    try {
      cur = rk4_step(cur, s, h, rhs);
    } catch (const std::domain_error&) {
      left_domain = true;  // a stage point left (0,1)
      s_fail = s;
      return cur;
    }
    s += h;
    if (!(cur.x > 0.0 && cur.x < 1.0)) {
      left_domain = true;
      s_fail = s;
      if (recorder) recorder->push_back({s, cur.x, cur.v1, cur.v2});
      return cur;
    }
    if (recorder) recorder->push_back({s, cur.x, cur.v1, cur.v2});
  }
  return cur;
}

}  // namespace

PhasePoint trace(double t, const PhasePoint& p, const FieldSampler& fields,
                 double s_target, std::vector<TraceSample>* recorder) {
  bool left = false;
  double s_fail = t;
  PhasePoint out = trace_impl(t, p, fields, s_target, recorder, left, s_fail);
  if (!left) return out;

  // Re-run with a recorder (deterministic) so the error carries the path.
  std::vector<TraceSample> samples;
  if (recorder) {
    samples = *recorder;
  } else {
    bool dummy;
    double dummy_s;
    trace_impl(t, p, fields, s_target, &samples, dummy, dummy_s);
  }
  std::ostringstream os;
  os << "confinement violated: characteristic from (t=" << t << ", x=" << p.x
     << ", v=(" << p.v1 << "," << p.v2 << ")) left (0,1) near s=" << s_fail;
  ConfinementError err(os.str());
  err.s.reserve(samples.size());
  for (const auto& q : samples) {
    err.s.push_back(q.s);
    err.x.push_back(q.x);
    err.v1.push_back(q.v1);
    err.v2.push_back(q.v2);
  }
  throw err;
}

double p_invariant(double s, const PhasePoint& p, const FieldSampler& fields) {
  return p.v2 + fields.psi(s, p.x) + fields.pot->psi(p.x);
}

double confinement_bound(double x, double v1, double v2, double alpha,
                         double C0, double C0p, const ExternalPotential& pot) {
  double vmag = std::sqrt(v1 * v1 + v2 * v2);
  double denom = 1.0 / pot.c0 + 2.0 * vmag + C0p + 3.0 * C0 * alpha +
                 std::abs(pot.psi(x));
  return std::pow(pot.c0 / denom, 1.0 / pot.gamma);
}

}  // namespace rvm
