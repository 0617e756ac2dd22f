#include "rvm/vlasov.hpp"

#include <algorithm>
#include <cmath>

#include "rvm/errors.hpp"

namespace rvm {

CurrentSlice moments(const DistributionState& f, const PhaseSpaceGrid& g,
                     const VelocityTables& vt) {
  CurrentSlice s;
  s.t = f.t;
  s.rho.assign(g.nx + 1, 0.0);
  s.j1.assign(g.nx + 1, 0.0);
  s.j2.assign(g.nx + 1, 0.0);
  if (f.empty_support()) return s;
  int nvn = g.n_vnodes();
  for (int i = f.sx_lo; i <= f.sx_hi; ++i) {
    double rho = 0.0, j1 = 0.0, j2 = 0.0;
    const double* row = &f.values[f.idx(i, 0, 0)];
    for (int j = 0; j < nvn; ++j) {
      double wj = vt.w[j];
      for (int k = 0; k < nvn; ++k) {
        double val = row[j * nvn + k];
        if (val == 0.0) continue;
        double w = wj * vt.w[k] * val;
        size_t id = size_t(j) * nvn + k;
        rho += w;
        j1 += w * vt.vhat1[id];
        j2 += w * vt.vhat2[id];
      }
    }
    s.rho[i] = rho;
    s.j1[i] = j1;
    s.j2[i] = j2;
  }
  return s;
}

std::vector<double> weighted_moment(const DistributionState& f,
                                    const PhaseSpaceGrid& g,
                                    const VelocityTables& vt,
                                    const std::vector<double>& weight) {
  std::vector<double> out(g.nx + 1, 0.0);
  if (f.empty_support()) return out;
  int nvn = g.n_vnodes();
  for (int i = f.sx_lo; i <= f.sx_hi; ++i) {
    double acc = 0.0;
    const double* row = &f.values[f.idx(i, 0, 0)];
    for (int j = 0; j < nvn; ++j) {
      double wj = vt.w[j];
      for (int k = 0; k < nvn; ++k) {
        double val = row[j * nvn + k];
        if (val == 0.0) continue;
        acc += wj * vt.w[k] * val * weight[size_t(j) * nvn + k];
      }
    }
    out[i] = acc;
  }
  return out;
}

namespace {

// Monotone cubic Hermite along one axis (monotonized-central limited
// derivatives), evaluated at fraction th of the [v0, v1] interval.  Third
// order in smooth monotone regions, and the value is guaranteed to lie
// between v0 and v1, so nesting it per axis preserves positivity and the
// maximum principle exactly with no clamping.
inline double hermite1d(double vm, double v0, double v1, double v2,
                        double th) {
  double sl = v0 - vm, sc = v1 - v0, sr = v2 - v1;
  double d0 = 0.0, d1 = 0.0;
  if (sl * sc > 0.0) {
    double m = 0.5 * (sl + sc);
    double cap = 2.0 * std::min(std::abs(sl), std::abs(sc));
    d0 = std::copysign(std::min(std::abs(m), cap), sc);
  }
  if (sc * sr > 0.0) {
    double m = 0.5 * (sc + sr);
    double cap = 2.0 * std::min(std::abs(sc), std::abs(sr));
    d1 = std::copysign(std::min(std::abs(m), cap), sc);
  }
  return v0 + th * (d0 + th * ((3.0 * sc - 2.0 * d0 - d1) +
                               th * (d0 + d1 - 2.0 * sc)));
}

// Conservative bounded translation of one grid line by a constant
// displacement of `a` cells: out_i is the average of a monotonized
// parabolic reconstruction over the source interval [i-a-1/2, i-a+1/2]
// (vacuum beyond the line ends).  Face values are clamped to the adjacent
// means and each parabola is monotonized, so every parabola stays within
// the range of its three neighbouring values: outputs are convex averages
// of reconstruction slices (positivity and the maximum principle are
// exact), and each cell's mass is split between exactly two targets, so the
// line sum telescopes (mass is exact to rounding).  A nodal gather instead
// leaks mass at first order over the T/dt steps: the sub-cell offsets make
// its limited interpolation diffusive wherever the data is under-resolved.
struct LineShift {
  std::vector<double> face, um, up, c6, pl, in, outv;

  void resize(int n) {
    face.resize(size_t(n) + 1);
    um.resize(n);
    up.resize(n);
    c6.resize(n);
    pl.resize(n);
    in.resize(n);
    outv.resize(n);
  }

  void apply(const double* u, int n, double a, double* out) {
    auto at = [&](int i) { return (unsigned(i) < unsigned(n)) ? u[i] : 0.0; };
    for (int i = 0; i <= n; ++i) {
      double fv = (7.0 * (at(i - 1) + at(i)) - (at(i - 2) + at(i + 1))) / 12.0;
      double lo = std::min(at(i - 1), at(i));
      double hi = std::max(at(i - 1), at(i));
      face[i] = std::min(hi, std::max(lo, fv));
    }
    for (int i = 0; i < n; ++i) {
      double c = u[i], lo = face[i], hi = face[i + 1];
      if ((hi - c) * (c - lo) <= 0.0) {
        lo = hi = c;  // local extremum: flat reconstruction
      } else {
        double d = hi - lo, k6 = 6.0 * c - 3.0 * (lo + hi);
        if (d * k6 > d * d)
          lo = 3.0 * c - 2.0 * hi;
        else if (d * k6 < -d * d)
          hi = 3.0 * c - 2.0 * lo;
      }
      um[i] = lo;
      up[i] = hi;
      c6[i] = 6.0 * c - 3.0 * (lo + hi);
    }
    int s = int(std::floor(a));
    double xi = 1.0 - (a - s);  // left fraction kept by target i - s
    for (int i = 0; i < n; ++i) {
      double d = up[i] - um[i];
      pl[i] = xi * (um[i] + xi * (0.5 * (d + c6[i]) - c6[i] * xi / 3.0));
    }
    for (int i = 0; i < n; ++i) {
      int m2 = i - s, m1 = m2 - 1;
      double right = 0.0, left = 0.0;
      if (unsigned(m1) < unsigned(n)) right = u[m1] - pl[m1];
      if (unsigned(m2) < unsigned(n)) left = pl[m2];
      if (right < 0.0) right = 0.0;  // rounding guards only
      if (left < 0.0) left = 0.0;
      out[i] = right + left;
    }
  }

  // Strided in-place variant; zero lines and zero displacement short-cut.
  void apply_strided(double* base, int n, long stride, double a) {
    if (a == 0.0) return;
    bool any = false;
    for (int i = 0; i < n; ++i) {
      in[i] = base[i * stride];
      any = any || in[i] != 0.0;
    }
    if (!any) return;
    apply(in.data(), n, a, outv.data());
    for (int i = 0; i < n; ++i) base[i * stride] = outv[i];
  }
};

}  // namespace

DistributionState advance_f(const DistributionState& f,
                            const FieldSampler& fields,
                            const PhaseSpaceGrid& g) {
  double dt = g.dt();
  DistributionState out;
  out.t = f.t + dt;
  out.nx = f.nx;
  out.nv = f.nv;
  out.values.assign(f.values.size(), 0.0);
  out.sx_lo = 1;
  out.sx_hi = 0;
  out.env = f.env;
  if (f.empty_support()) return out;

  int nvn = g.n_vnodes();
  double dv = g.dv, dx = g.dx, vmax = g.v_max;

  // Active x window: each half shift spreads one cell at most (|vhat1| < 1
  // and dt = dx), and the analytic envelope clips the window — the solution
  // vanishes outside it, so values beyond it are exact zeros.
  int env_lo = 1, env_hi = g.nx - 1;
  if (f.env.confine_x) {
    double th = f.env.theta(out.t);
    env_lo = std::max(env_lo, int(std::ceil(th / dx - 1e-9)));
    env_hi = std::min(env_hi, int(std::floor((1.0 - th) / dx + 1e-9)));
  }
  int w_lo = std::max(env_lo, f.sx_lo - 2);
  int w_hi = std::min(env_hi, f.sx_hi + 2);
  if (w_lo > w_hi) return out;
  int wn = w_hi - w_lo + 1;

  // Strang split: half x shift, velocity stage with midpoint fields, half
  // x shift.  The x shift and the electric kicks are constant-displacement
  // translations per line (conservative, bounded); the magnetic rotation is
  // the single interpolating stage, and its backward feet are exact because
  // |v| (hence the relativistic rotation rate B/gamma) is invariant.
  std::vector<double> w(f.values);
  LineShift ls;
  ls.resize(std::max(wn, nvn));

  std::vector<double> h1tab(size_t(nvn) * nvn), igam(size_t(nvn) * nvn),
      gam(size_t(nvn) * nvn);
  for (int j = 0; j < nvn; ++j) {
    double vj = g.v(j);
    for (int k = 0; k < nvn; ++k) {
      double vk = g.v(k);
      double lor = std::sqrt(1.0 + vj * vj + vk * vk);
      double ig = 1.0 / lor;
      h1tab[size_t(j) * nvn + k] = vj * ig;
      igam[size_t(j) * nvn + k] = ig;
      gam[size_t(j) * nvn + k] = lor;
    }
  }

  long xstride = (long)nvn * nvn;
  auto x_half = [&]() {
    for (int j = 0; j < nvn; ++j)
      for (int k = 0; k < nvn; ++k) {
        double a = 0.5 * h1tab[size_t(j) * nvn + k] * dt / dx;
        ls.apply_strided(&w[f.idx(w_lo, j, k)], wn, xstride, a);
      }
  };

  x_half();

  double tm = f.t + 0.5 * dt;
  double v_env = f.env.v_radius(out.t);
  double v_lim2 = v_env * v_env * (1.0 + 1e-12);
  std::vector<double> blk(size_t(nvn) * nvn);
  std::vector<int> kept;
  kept.reserve(size_t(nvn) * nvn);
  for (int i = w_lo; i <= w_hi; ++i) {
    double* col = &w[f.idx(i, 0, 0)];
    double e1, e2, b;
    fields.blend_nodes(tm, i, e1, e2, b);
    double bt = b + fields.pot->b_ext(g.x(i));
    double a1 = 0.5 * e1 * dt / dv, a2 = 0.5 * e2 * dt / dv;

    auto kick = [&]() {
      for (int k = 0; k < nvn; ++k) ls.apply_strided(col + k, nvn, nvn, a1);
      for (int j = 0; j < nvn; ++j)
        ls.apply_strided(col + (long)j * nvn, nvn, 1, a2);
    };

    kick();

    if (bt != 0.0) {
      std::copy(col, col + size_t(nvn) * nvn, blk.begin());
      double r_blk2 = -1.0;
      for (int j = 0; j < nvn; ++j) {
        double vj = g.v(j);
        for (int k = 0; k < nvn; ++k)
          if (blk[size_t(j) * nvn + k] != 0.0) {
            double vk = g.v(k);
            double r2 = vj * vj + vk * vk;
            if (r2 > r_blk2) r_blk2 = r2;
          }
      }
      if (r_blk2 >= 0.0) {
        // the rotation preserves |v|, so it maps the kept disk onto itself:
        // its output support cannot pass the pre-stage support ring, and the
        // disk mass is an exact invariant of the stage
        double lim2 = std::min(r_blk2, v_lim2);
        kept.clear();
        double sum_pre = 0.0, sum_post = 0.0;
        double e_pre = 0.0, e_post = 0.0;
        for (int j = 0; j < nvn; ++j) {
          double vj = g.v(j);
          for (int k = 0; k < nvn; ++k) {
            double vk = g.v(k);
            double r2 = vj * vj + vk * vk;
            size_t id = size_t(j) * nvn + k;
            if (r2 > lim2) {
              col[id] = 0.0;
              continue;
            }
            sum_pre += blk[id];
            e_pre += gam[id] * blk[id];
            kept.push_back(int(id));
            double phi = bt * dt * igam[id];
            double c = std::cos(phi), sn = std::sin(phi);
            double aj = (vj * c - vk * sn + vmax) / dv;
            double ak = (vj * sn + vk * c + vmax) / dv;
            int j0 = int(std::floor(aj)), k0 = int(std::floor(ak));
            double thj = aj - j0, thk = ak - k0;
            double vj4[4];
            for (int bb = 0; bb < 4; ++bb) {
              int jj = j0 - 1 + bb;
              if (jj < 0 || jj > nvn - 1) {
                vj4[bb] = 0.0;
                continue;
              }
              double vk4[4];
              for (int cc = 0; cc < 4; ++cc) {
                int kk = k0 - 1 + cc;
                vk4[cc] =
                    (kk < 0 || kk > nvn - 1) ? 0.0 : blk[size_t(jj) * nvn + kk];
              }
              vj4[bb] = hermite1d(vk4[0], vk4[1], vk4[2], vk4[3], thk);
            }
            double val = hermite1d(vj4[0], vj4[1], vj4[2], vj4[3], thj);
            col[id] = val;
            sum_post += val;
            e_post += gam[id] * val;
          }
        }
        // |v| is pointwise invariant, so the stage also preserves the
        // gamma-weighted disk sum (the column's kinetic moment) exactly.
        // Project the gathered column back onto both invariants with a
        // bounded headroom-weighted correction u = w*(alpha + beta*(gamma -
        // gbar)), w = val*(max - val), capped to keep 0 <= val <= max.
        double dm = sum_pre - sum_post;
        double de = e_pre - e_post;
        double maxv = f.max_value;
        double tol_m = 1e-15 * std::max(sum_pre, 1e-300);
        double tol_e = 1e-15 * std::max(e_pre, 1e-300);
        for (int pass = 0; pass < 4; ++pass) {
          if (std::abs(dm) <= tol_m && std::abs(de) <= tol_e) break;
          double sw = 0.0, swg = 0.0;
          for (int id : kept) {
            double ww = col[id] * (maxv - col[id]);
            sw += ww;
            swg += ww * gam[id];
          }
          if (sw <= 0.0) break;
          double gbar = swg / sw;
          double var = 0.0;
          for (int id : kept) {
            double ww = col[id] * (maxv - col[id]);
            double dg = gam[id] - gbar;
            var += ww * dg * dg;
          }
          double alpha = dm / sw;
          double beta = var > sw * 1e-16 ? (de - gbar * dm) / var : 0.0;
          double got_m = 0.0, got_e = 0.0;
          for (int id : kept) {
            double ww = col[id] * (maxv - col[id]);
            double u = ww * (alpha + beta * (gam[id] - gbar));
            double lo = -col[id], hi = maxv - col[id];
            if (u < lo) u = lo;
            else if (u > hi) u = hi;
            col[id] += u;
            got_m += u;
            got_e += gam[id] * u;
          }
          dm -= got_m;
          de -= got_e;
        }
      }
    }

    kick();
  }

  x_half();

  // Finalize: clip to the velocity envelope (exact-zero region), flush the
  // rounding halo, and rebuild the support metadata.
  double trunc = 1e-14 * f.max_value;
  int out_lo = g.nx + 1, out_hi = -1;
  double out_max = 0.0, out_vr2 = 0.0;
  for (int i = w_lo; i <= w_hi; ++i) {
    bool row_any = false;
    for (int j = 0; j < nvn; ++j) {
      double vj = g.v(j);
      for (int k = 0; k < nvn; ++k) {
        size_t id = f.idx(i, j, k);
        double val = w[id];
        if (val == 0.0) continue;
        double vk = g.v(k);
        double r2 = vj * vj + vk * vk;
        if (val < trunc || r2 > v_lim2) continue;
        if (val > f.max_value) val = f.max_value;  // rounding guard only
        out.values[id] = val;
        row_any = true;
        if (val > out_max) out_max = val;
        if (r2 > out_vr2) out_vr2 = r2;
      }
    }
    if (row_any) {
      if (i < out_lo) out_lo = i;
      out_hi = i;
    }
  }

  if (out_hi >= out_lo) {
    out.sx_lo = out_lo;
    out.sx_hi = out_hi;
  }
  out.max_value = out_max;
  out.min_value = 0.0;
  out.v_radius = std::sqrt(out_vr2);
  return out;
}

}  // namespace rvm
