#include "wicklab/kinetic.hpp"

#include <algorithm>
#include <cmath>

namespace wicklab {

void KGrid::validate() const {
  if (d < 1 || d > kMaxDim) throw ValidationError("grid: bad dimension");
  if (k_max <= 0 || mk < 2) throw ValidationError("grid: k grid must have extent and >= 2 points");
  for (int i = 0; i < d; ++i)
    if (mx[i] > 1 && x_max <= 0) throw ValidationError("grid: x extent required");
  if (mz > 1 && z_max <= 0) throw ValidationError("grid: zeta extent required");
  if (mk % 2 == 0 || (mz > 1 && mz % 2 == 0))
    throw ValidationError("grid: odd point counts keep grids symmetric about 0");
}

double KGrid::hx() const {
  int m = 1;
  for (int i = 0; i < d; ++i) m = std::max(m, mx[i]);
  return m > 1 ? 2.0 * x_max / (m - 1) : 1.0;
}

int KGrid::nk() const {
  int n = 1;
  for (int i = 0; i < d; ++i) n *= mk;
  return n;
}
int KGrid::nx() const {
  int n = 1;
  for (int i = 0; i < d; ++i) n *= mx[i];
  return n;
}
int KGrid::nz() const {
  if (mz <= 1) return 1;
  int n = 1;
  for (int i = 0; i < d; ++i) n *= mz;
  return n;
}

VecR KGrid::k_of(int flat) const {
  VecR k(d);
  for (int i = d - 1; i >= 0; --i) {
    int j = flat % mk;
    flat /= mk;
    k.v[i] = -k_max + j * hk();
  }
  return k;
}

VecR KGrid::x_of(int flat) const {
  VecR x(d);
  for (int i = d - 1; i >= 0; --i) {
    int j = flat % mx[i];
    flat /= mx[i];
    x.v[i] = (mx[i] > 1) ? -x_max + j * (2.0 * x_max / (mx[i] - 1)) : 0.0;
  }
  return x;
}

VecR KGrid::z_of(int flat) const {
  VecR z(d);
  if (mz <= 1) return z;
  for (int i = d - 1; i >= 0; --i) {
    int j = flat % mz;
    flat /= mz;
    z.v[i] = -z_max + j * hz();
  }
  return z;
}

size_t KineticState::index(int ix, int ik, int iz) const {
  return (size_t(ix) * grid.nk() + ik) * grid.nz() + iz;
}

double KineticState::sup_norm() const {
  double m = 0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

KineticState make_w_state(const KGrid& g,
                          const std::function<double(const VecR&, const VecR&)>& w0) {
  g.validate();
  KineticState s;
  s.grid = g;
  s.kind = StateKind::W;
  s.data.resize(size_t(g.nx()) * g.nk());
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int ik = 0; ik < g.nk(); ++ik) s.data[s.index(ix, ik)] = w0(g.x_of(ix), g.k_of(ik));
  return s;
}

KineticState make_e_state(const KGrid& g,
                          const std::function<double(const VecR&, const VecR&, const VecR&)>& e0) {
  g.validate();
  if (g.mz <= 1) throw ValidationError("make_e_state: grid has no zeta axis");
  KineticState s;
  s.grid = g;
  s.kind = StateKind::E;
  s.data.resize(size_t(g.nx()) * g.nk() * g.nz());
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int ik = 0; ik < g.nk(); ++ik)
      for (int iz = 0; iz < g.nz(); ++iz)
        s.data[s.index(ix, ik, iz)] = e0(g.x_of(ix), g.k_of(ik), g.z_of(iz));
  return s;
}

namespace {

// gather multilinear corner indices/weights for a point on a uniform axis
struct AxisInterp {
  int i0 = 0;
  double w1 = 0;  // weight of i0+1
  bool inside = false;
};

AxisInterp axis_interp(double coord, double lo, double h, int m) {
  AxisInterp a;
  double u = (coord - lo) / h;
  if (u < 0 || u > m - 1) return a;
  a.i0 = std::min(int(u), m - 2);
  a.w1 = u - a.i0;
  a.inside = true;
  return a;
}

}  // namespace

namespace {

double interp_grid(const KGrid& g, const double* kslice, const VecR& k) {
  AxisInterp ax[kMaxDim];
  for (int i = 0; i < g.d; ++i) {
    ax[i] = axis_interp(k.v[i], -g.k_max, g.hk(), g.mk);
    if (!ax[i].inside) return 0.0;
  }
  double acc = 0;
  int corners = 1 << g.d;
  for (int c = 0; c < corners; ++c) {
    double w = 1;
    int flat = 0;
    for (int i = 0; i < g.d; ++i) {
      int bit = (c >> i) & 1;
      w *= bit ? ax[i].w1 : 1.0 - ax[i].w1;
      flat = flat * g.mk + ax[i].i0 + bit;
    }
    if (w != 0) acc += w * kslice[flat];
  }
  return acc;
}

}  // namespace

double interp_w(const KineticState& s, int ix, const VecR& k) {
  return interp_grid(s.grid, s.data.data() + s.index(ix, 0), k);
}

namespace {

// separable 4-point Lagrange interpolation; falls back to trilinear near the
// boundary and to zero outside
double interp_grid_cubic(const KGrid& g, const double* kslice, const VecR& k) {
  double h = g.hk();
  int j0[kMaxDim];
  double w[kMaxDim][4];
  for (int i = 0; i < g.d; ++i) {
    double u = (k.v[i] + g.k_max) / h;
    if (u < 0 || u > g.mk - 1) return 0.0;
    int j = int(u);
    if (j < 1 || j > g.mk - 3) return interp_grid(g, kslice, k);
    double t = u - j;  // in [0,1) between nodes j and j+1
    j0[i] = j - 1;
    w[i][0] = -t * (t - 1) * (t - 2) / 6.0;
    w[i][1] = (t + 1) * (t - 1) * (t - 2) / 2.0;
    w[i][2] = -(t + 1) * t * (t - 2) / 2.0;
    w[i][3] = (t + 1) * t * (t - 1) / 6.0;
  }
  double acc = 0;
  int stencil = 1;
  for (int i = 0; i < g.d; ++i) stencil *= 4;
  for (int c = 0; c < stencil; ++c) {
    double wt = 1;
    int flat = 0, cc = c;
    for (int i = 0; i < g.d; ++i) {
      int b = cc & 3;
      cc >>= 2;
      wt *= w[i][b];
      flat = flat * g.mk + j0[i] + b;
    }
    if (wt != 0) acc += wt * kslice[flat];
  }
  return acc;
}

}  // namespace

void collision_wk(const KineticState& s, const ResonantRule& rule, KineticState& rate,
                  int threads) {
  if (s.kind != StateKind::W) throw ValidationError("collision_wk: needs a W state");
  rate = s;
  const KGrid& g = s.grid;
  for (int ix = 0; ix < g.nx(); ++ix) {
    parallel_for(
        g.nk(),
        [&](int64_t lo, int64_t hi) {
          for (int64_t ik = lo; ik < hi; ++ik) {
            VecR k = g.k_of(int(ik));
            double acc = 0;
            for (size_t q = 0; q < rule.size(); ++q) {
              VecR k1 = k + rule.a[q];
              VecR k3 = k + rule.b[q];
              VecR k2 = k1 + rule.b[q];
              double w1 = interp_w(s, ix, k1);
              if (w1 == 0) continue;
              double w2 = interp_w(s, ix, k2);
              if (w2 == 0) continue;
              acc += rule.w[q] * w1 * w2 * interp_w(s, ix, k3);
            }
            rate.data[rate.index(ix, int(ik))] = 2.0 * acc;
          }
        },
        threads);
  }
}

namespace {

// small dense DFT over the zeta grid (mz per axis, d axes)
struct ZetaDft {
  int m = 1, d = 3, n = 1;
  std::vector<cplx> tw;   // m x m forward twiddles
  std::vector<cplx> itw;  // inverse

  ZetaDft(int m_, int d_) : m(m_), d(d_) {
    n = 1;
    for (int i = 0; i < d; ++i) n *= m;
    tw.resize(size_t(m) * m);
    itw.resize(size_t(m) * m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        tw[size_t(a) * m + b] = std::polar(1.0, -kTwoPi * a * b / m);
        itw[size_t(a) * m + b] = std::polar(1.0, kTwoPi * a * b / m);
      }
  }

  void transform(std::vector<cplx>& v, bool inverse) const {
    const auto& t = inverse ? itw : tw;
    std::vector<cplx> tmp(v.size());
    int stride = 1;
    for (int axis = d - 1; axis >= 0; --axis) {
      int outer = n / (stride * m);
      for (int o = 0; o < outer; ++o)
        for (int s = 0; s < stride; ++s) {
          size_t base = size_t(o) * stride * m + s;
          for (int w = 0; w < m; ++w) {
            cplx acc(0, 0);
            for (int j = 0; j < m; ++j) acc += t[size_t(w) * m + j] * v[base + size_t(j) * stride];
            tmp[base + size_t(w) * stride] = acc;
          }
        }
      std::swap(v, tmp);
      stride *= m;
    }
    if (inverse) {
      double inv = 1.0 / double(n);
      for (auto& x : v) x *= inv;
    }
  }
};

}  // namespace

void collision_wk2(const KineticState& s, const ResonantRule& rule, KineticState& rate,
                   int threads) {
  if (s.kind != StateKind::E) throw ValidationError("collision_wk2: needs an E state");
  rate = s;
  const KGrid& g = s.grid;
  const int nz = g.nz(), nk = g.nk();
  ZetaDft dft(g.mz, g.d);
  double cell = std::pow(g.hz(), 2.0 * g.d);

  for (int ix = 0; ix < g.nx(); ++ix) {
    // forward transforms of every k slice
    std::vector<cplx> hat(size_t(nk) * nz);
    parallel_for(
        nk,
        [&](int64_t lo, int64_t hi) {
          std::vector<cplx> buf(nz);
          for (int64_t ik = lo; ik < hi; ++ik) {
            for (int iz = 0; iz < nz; ++iz) buf[iz] = s.data[s.index(ix, int(ik), iz)];
            dft.transform(buf, false);
            std::copy(buf.begin(), buf.end(), hat.begin() + size_t(ik) * nz);
          }
        },
        threads);

    // gather hat at an off-grid k by multilinear interpolation
    auto gather = [&](const VecR& k, std::vector<cplx>& out) -> bool {
      AxisInterp ax[kMaxDim];
      for (int i = 0; i < g.d; ++i) {
        ax[i] = axis_interp(k.v[i], -g.k_max, g.hk(), g.mk);
        if (!ax[i].inside) return false;
      }
      std::fill(out.begin(), out.end(), cplx(0, 0));
      int corners = 1 << g.d;
      for (int c = 0; c < corners; ++c) {
        double w = 1;
        int flat = 0;
        for (int i = 0; i < g.d; ++i) {
          int bit = (c >> i) & 1;
          w *= bit ? ax[i].w1 : 1.0 - ax[i].w1;
          flat = flat * g.mk + ax[i].i0 + bit;
        }
        if (w == 0) continue;
        const cplx* src = hat.data() + size_t(flat) * nz;
        for (int iz = 0; iz < nz; ++iz) out[iz] += w * src[iz];
      }
      return true;
    };

    parallel_for(
        nk,
        [&](int64_t lo, int64_t hi) {
          std::vector<cplx> e1(nz), e2(nz), e3(nz), acc(nz);
          for (int64_t ik = lo; ik < hi; ++ik) {
            VecR k = g.k_of(int(ik));
            std::fill(acc.begin(), acc.end(), cplx(0, 0));
            for (size_t q = 0; q < rule.size(); ++q) {
              VecR k1 = k + rule.a[q];
              VecR k3 = k + rule.b[q];
              VecR k2 = k1 + rule.b[q];
              if (!gather(k1, e1)) continue;
              if (!gather(k2, e2)) continue;
              if (!gather(k3, e3)) continue;
              double w = rule.w[q];
              for (int iz = 0; iz < nz; ++iz) acc[iz] += w * e1[iz] * std::conj(e2[iz]) * e3[iz];
            }
            dft.transform(acc, true);
            for (int iz = 0; iz < nz; ++iz)
              rate.data[rate.index(ix, int(ik), iz)] = 2.0 * cell * acc[iz].real();
          }
        },
        threads);
  }
}

KineticState transport_shift(const KineticState& s, double dt) {
  const KGrid& g = s.grid;
  bool any = false;
  for (int i = 0; i < g.d; ++i) any |= g.mx[i] > 1;
  if (!any || dt == 0) return s;
  KineticState out = s;
  double hx = g.hx();
  for (int ik = 0; ik < g.nk(); ++ik) {
    VecR k = g.k_of(ik);
    for (int ix = 0; ix < g.nx(); ++ix) {
      // source point x - dt k, multilinear over the active axes
      VecR x = g.x_of(ix);
      AxisInterp ax[kMaxDim];
      bool inside = true;
      for (int i = 0; i < g.d && inside; ++i) {
        if (g.mx[i] <= 1) continue;
        ax[i] = axis_interp(x.v[i] - dt * k.v[i], -g.x_max, hx, g.mx[i]);
        inside = ax[i].inside;
      }
      for (int iz = 0; iz < g.nz(); ++iz) {
        double val = 0;
        if (inside) {
          // iterate corners over active axes only
          int act[kMaxDim], na = 0;
          for (int i = 0; i < g.d; ++i)
            if (g.mx[i] > 1) act[na++] = i;
          int corners = 1 << na;
          for (int cbits = 0; cbits < corners; ++cbits) {
            double w = 1;
            int idx[kMaxDim];
            for (int i = 0, ai = 0; i < g.d; ++i) {
              if (g.mx[i] > 1) {
                int bit = (cbits >> ai) & 1;
                w *= bit ? ax[i].w1 : 1.0 - ax[i].w1;
                idx[i] = ax[i].i0 + bit;
                ++ai;
              } else {
                idx[i] = 0;
              }
            }
            if (w == 0) continue;
            int flat = 0;
            for (int i = 0; i < g.d; ++i) flat = flat * g.mx[i] + idx[i];
            val += w * s.data[s.index(flat, ik, iz)];
          }
        }
        out.data[out.index(ix, ik, iz)] = val;
      }
    }
  }
  return out;
}

KineticState marginalize_zeta(const KineticState& e) {
  if (e.kind != StateKind::E) throw ValidationError("marginalize_zeta: needs an E state");
  const KGrid& g = e.grid;
  KineticState w;
  w.grid = g;
  w.grid.mz = 1;
  w.grid.z_max = 0;
  w.kind = StateKind::W;
  w.time = e.time;
  w.data.assign(size_t(g.nx()) * g.nk(), 0.0);
  double hz = g.hz();
  // trapezoid weights per axis: 1/2 at the two ends
  auto axis_weight = [&](int j) { return (j == 0 || j == g.mz - 1) ? 0.5 : 1.0; };
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int ik = 0; ik < g.nk(); ++ik) {
      double acc = 0;
      for (int iz = 0; iz < g.nz(); ++iz) {
        int f = iz;
        double wt = 1;
        for (int i = g.d - 1; i >= 0; --i) {
          wt *= axis_weight(f % g.mz);
          f /= g.mz;
        }
        acc += wt * e.data[e.index(ix, ik, iz)];
      }
      w.data[w.index(ix, ik)] = acc * std::pow(hz, g.d);
    }
  return w;
}

namespace {

void rate_of(const KineticState& s, const ResonantRule& rule, KineticState& rate, int threads) {
  if (s.kind == StateKind::W)
    collision_wk(s, rule, rate, threads);
  else
    collision_wk2(s, rule, rate, threads);
}

void axpy(KineticState& y, double a, const KineticState& x) {
  for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += a * x.data[i];
}

}  // namespace

Trajectory solve_rk4(const KineticState& s0, const ResonantRule& rule, const SolveOptions& opt) {
  if (opt.dt <= 0 || opt.T < 0) throw ValidationError("solve: T >= 0 and dt > 0 required");
  Trajectory traj;
  KineticState s = s0;
  double guard = opt.blowup_guard * std::max(s.sup_norm(), 1e-300);
  traj.times.push_back(s.time);
  traj.states.push_back(s);
  int steps = int(std::ceil(opt.T / opt.dt - 1e-12));
  KineticState k1, k2, k3, k4, tmp;
  for (int step = 0; step < steps; ++step) {
    double dt = std::min(opt.dt, opt.T - step * opt.dt);
    if (opt.transport_on) s = transport_shift(s, 0.5 * dt);
    rate_of(s, rule, k1, opt.threads);
    tmp = s;
    axpy(tmp, 0.5 * dt, k1);
    rate_of(tmp, rule, k2, opt.threads);
    tmp = s;
    axpy(tmp, 0.5 * dt, k2);
    rate_of(tmp, rule, k3, opt.threads);
    tmp = s;
    axpy(tmp, dt, k3);
    rate_of(tmp, rule, k4, opt.threads);
    axpy(s, dt / 6.0, k1);
    axpy(s, dt / 3.0, k2);
    axpy(s, dt / 3.0, k3);
    axpy(s, dt / 6.0, k4);
    if (opt.transport_on) s = transport_shift(s, 0.5 * dt);
    s.time += dt;
    if (s.sup_norm() > guard)
      throw BudgetError("solve_rk4: blowup guard tripped (instability)");
    bool record = opt.record_stride > 0 && ((step + 1) % opt.record_stride == 0);
    if (record || step == steps - 1) {
      traj.times.push_back(s.time);
      traj.states.push_back(s);
    }
  }
  return traj;
}

KineticState PicardExpansion::at_time(double t) const {
  KineticState s;
  s.grid = grid;
  s.kind = StateKind::W;
  s.time = t;
  s.data.assign(coeff.empty() ? 0 : coeff[0].size(), 0.0);
  double tm = 1;
  for (const auto& c : coeff) {
    for (size_t i = 0; i < c.size(); ++i) s.data[i] += tm * c[i];
    tm *= t;
  }
  return s;
}

namespace {

void picard_extend(PicardExpansion& ex, const std::function<double(const VecR&)>& w0_analytic,
                   const ResonantRule& rule, int orders, int threads, bool analytic_order0,
                   bool cubic_interp) {
  const KGrid& g = ex.grid;
  int nk = g.nk();
  if (ex.coeff.empty()) {
    ex.coeff.emplace_back(nk);
    for (int ik = 0; ik < nk; ++ik) ex.coeff[0][ik] = w0_analytic(g.k_of(ik));
  }
  for (int m = static_cast<int>(ex.coeff.size()); m <= orders; ++m) {
    std::vector<std::array<int, 3>> splits;
    for (int m1 = 0; m1 < m; ++m1)
      for (int m2 = 0; m1 + m2 < m; ++m2) splits.push_back({m1, m2, m - 1 - m1 - m2});
    std::vector<double> next(nk, 0.0);
    parallel_for(
        nk,
        [&](int64_t lo, int64_t hi) {
          // per node, the values of all lower orders at (k1,k2,k3) are
          // gathered once and every split reuses them
          std::vector<double> val(3 * size_t(m));
          for (int64_t ik = lo; ik < hi; ++ik) {
            VecR k = g.k_of(int(ik));
            double acc = 0;
            for (size_t qn = 0; qn < rule.size(); ++qn) {
              VecR k1 = k + rule.a[qn];
              VecR k3 = k + rule.b[qn];
              VecR k2 = k1 + rule.b[qn];
              const VecR* ks[3] = {&k1, &k2, &k3};
              for (int j = 0; j < 3; ++j) {
                val[size_t(j) * m + 0] = analytic_order0
                                             ? w0_analytic(*ks[j])
                                             : interp_grid(g, ex.coeff[0].data(), *ks[j]);
                for (int mm = 1; mm < m; ++mm)
                  val[size_t(j) * m + mm] =
                      cubic_interp ? interp_grid_cubic(g, ex.coeff[mm].data(), *ks[j])
                                   : interp_grid(g, ex.coeff[mm].data(), *ks[j]);
              }
              double node = 0;
              for (auto& sp : splits)
                node += val[0 * size_t(m) + sp[0]] * val[1 * size_t(m) + sp[1]] *
                        val[2 * size_t(m) + sp[2]];
              acc += rule.w[qn] * node;
            }
            next[ik] = 2.0 / double(m) * acc;
          }
        },
        threads);
    ex.coeff.push_back(std::move(next));
  }
}

}  // namespace

PicardExpansion picard_terms(const KGrid& g,
                             const std::function<double(const VecR&)>& w0_analytic,
                             const ResonantRule& rule, int orders, int threads,
                             bool analytic_order0, bool cubic_interp) {
  g.validate();
  PicardExpansion ex;
  ex.grid = g;
  picard_extend(ex, w0_analytic, rule, orders, threads, analytic_order0, cubic_interp);
  return ex;
}

KineticState solve_picard(const KGrid& g, const std::function<double(const VecR&)>& w0_analytic,
                          const ResonantRule& rule, double T, double tol, int max_orders,
                          int threads, bool analytic_order0) {
  g.validate();
  PicardExpansion ex;
  ex.grid = g;
  picard_extend(ex, w0_analytic, rule, 0, threads, analytic_order0, false);
  double tm = T;
  for (int m = 1; m <= max_orders; ++m) {
    picard_extend(ex, w0_analytic, rule, m, threads, analytic_order0, false);
    double sup = 0;
    for (double v : ex.coeff[m]) sup = std::max(sup, std::abs(v));
    if (sup * tm < tol) return ex.at_time(T);
    tm *= T;
  }
  throw BudgetError("solve_picard: no convergence within the iteration budget");
}

}  // namespace wicklab
