#include "wicklab/spectra.hpp"

#include <cmath>
#include <unordered_map>

#include "wicklab/detail/lattice_engine.hpp"

namespace wicklab {

double leaf_weight(const Couple& c, const Decoration& dec, const InitialProfile& profile) {
  double w = 1;
  for (auto& [lp, lm] : c.pairing) {
    (void)lm;
    w *= profile.psi2(dec.plus_vals[lp]);
  }
  return w;
}

namespace {

// branching forest of one tree (nodes = branching nodes, ancestry inherited)
OrderedForest branching_forest(const SignedTernaryTree& t, std::vector<int32_t>& nodes) {
  nodes = t.branching_nodes();
  std::vector<int32_t> index(t.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = int32_t(i);
  OrderedForest f;
  f.parent.resize(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    int32_t a = t.nodes[nodes[i]].parent;
    while (a >= 0 && t.is_leaf(a)) a = t.nodes[a].parent;
    f.parent[i] = (a < 0) ? -1 : index[a];
  }
  return f;
}

// lazily filled dense table of Theta values for one tree, indexed by the
// integer resonance tuple (order <= 2)
class TreeThetaTable {
 public:
  TreeThetaTable(const SignedTernaryTree& t, double time, double omega_scale, int64_t omega_span)
      : time_(time), scale_(omega_scale), span_(omega_span) {
    std::vector<int32_t> nodes;
    forest_ = branching_forest(t, nodes);
    nb_ = forest_.size();
    if (nb_ > 2) throw BudgetError("finite_L_spectrum: couples of order > 2 are not supported");
    size_t dim = size_t(2 * span_ + 1);
    size_t total = nb_ == 0 ? 1 : (nb_ == 1 ? dim : dim * dim);
    if (total > 80'000'000) throw BudgetError("finite_L_spectrum: kernel table too large");
    vals_.assign(total, cplx(0, 0));
    have_.assign(total, 0);
  }

  cplx value(const int64_t* om) {
    if (nb_ == 0) return cplx(1, 0);
    size_t idx = size_t(om[0] + span_);
    if (nb_ == 2) idx = idx * size_t(2 * span_ + 1) + size_t(om[1] + span_);
    if (!have_[idx]) {
      std::vector<double> w(nb_);
      for (int i = 0; i < nb_; ++i) w[i] = scale_ * double(om[i]);
      vals_[idx] = theta(forest_, w).eval(time_);
      have_[idx] = 1;
    }
    return vals_[idx];
  }

 private:
  OrderedForest forest_;
  int nb_ = 0;
  double time_, scale_;
  int64_t span_;
  std::vector<cplx> vals_;
  std::vector<char> have_;
};

// dense |psi|^2 lookup over the lattice box
struct PsiTable {
  int64_t B = 0;
  int d = 3;
  std::vector<double> w;

  PsiTable(const InitialProfile& profile, double L, int64_t box) : B(box), d(profile.d) {
    int64_t side = 2 * B + 1;
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= size_t(side);
    w.resize(total);
    VecZ m(d);
    std::function<void(int, size_t)> rec = [&](int axis, size_t base) {
      for (int64_t x = -B; x <= B; ++x) {
        m.v[axis] = int32_t(x);
        size_t idx = base * size_t(side) + size_t(x + B);
        if (axis + 1 < d)
          rec(axis + 1, idx);
        else
          w[idx] = profile.psi2(to_real(m, 1.0 / L));
      }
    };
    rec(0, 0);
  }
  double at(const VecZ& m) const {
    int64_t side = 2 * B + 1;
    size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * size_t(side) + size_t(m.v[i] + B);
    return w[idx];
  }
};

}  // namespace

cplx finite_L_spectrum(const Couple& c, double t, const VecZ& k, double L, double alpha,
                       const InitialProfile& profile, double radius, uint64_t cap) {
  profile.validate();
  if (alpha <= 0 || alpha >= 2) throw ValidationError("finite_L_spectrum: alpha must be in (0,2)");
  int n = c.order;
  LatticeSpec spec{L, profile.d, radius > 0 ? radius : profile.spectral_radius};
  auto plan = detail::CoupleLatticePlan::build(c);
  auto ball = detail::lattice_ball(spec.d, spec.r2max());
  {
    unsigned __int128 worst = 1;
    for (int i = 0; i + 1 < c.pair_count(); ++i) {
      worst *= ball.size();
      if (worst > (unsigned __int128)cap)
        throw CapacityError("finite_L_spectrum: lattice too large");
    }
  }
  int64_t box = int64_t(std::floor(std::sqrt(double(spec.r2max()))));
  PsiTable psi(profile, L, box);
  // per-tree kernel tables; omega numerators bounded by d*(2*box)^2
  int64_t span = int64_t(profile.d) * (2 * box) * (2 * box);
  int nb_plus = static_cast<int>(c.plus_tree.branching_nodes().size());

  struct Hooks {
    const Couple& c;
    PsiTable& psi;
    TreeThetaTable thp;
    TreeThetaTable thm;
    int nb_plus;
    cplx acc{0, 0};
    bool on_omega(int, int64_t) { return true; }
    bool on_emit(const std::vector<VecZ>& pv, const std::vector<int64_t>& om) {
      double w = 1;
      for (auto& v : pv) w *= psi.at(v);
      acc += w * thp.value(om.data()) * thm.value(om.data() + nb_plus);
      return true;
    }
  };
  // partition by the first free pair value; kernel tables are per-worker
  int nthreads = default_threads();
  std::vector<cplx> partial(nthreads, cplx(0, 0));
  size_t chunk = (ball.size() + nthreads - 1) / std::max(1, nthreads);
  std::vector<std::thread> pool;
  for (int tid = 0; tid < nthreads; ++tid) {
    size_t lo = tid * chunk, hi = std::min(ball.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, tid, lo, hi] {
      Hooks hooks{c,
                  psi,
                  TreeThetaTable(c.plus_tree, t, 1.0 / (L * L), span),
                  TreeThetaTable(c.minus_tree, t, 1.0 / (L * L), span),
                  nb_plus,
                  cplx(0, 0)};
      detail::run_lattice_enum(plan, c, k, ball, spec.r2max(), hooks, lo, hi);
      partial[tid] = hooks.acc;
    });
  }
  for (auto& th : pool) th.join();
  cplx total(0, 0);
  for (const cplx& v : partial) total += v;  // fixed merge order

  // polarity * (lambda/L^d)^{2n}, lambda = L^{-alpha/2}
  double pref = std::pow(L, -double(n) * (alpha + 2.0 * profile.d));
  return polarity(c) * pref * total;
}

cplx finite_L_spectrum_direct(const Couple& c, double t, const VecZ& k, double L, double alpha,
                              const InitialProfile& profile, double radius) {
  // independent route: enumerate decorations, evaluate Theta per decoration
  LatticeSpec spec{L, profile.d, radius > 0 ? radius : profile.spectral_radius};
  std::vector<int32_t> pn, mn;
  OrderedForest fp = branching_forest(c.plus_tree, pn);
  OrderedForest fm = branching_forest(c.minus_tree, mn);
  cplx acc(0, 0);
  enumerate_lattice_decorations(c, k, spec, [&](const LatticeDecoration& dec) {
    double w = 1;
    for (auto& [lp, lm] : c.pairing) {
      (void)lm;
      w *= profile.psi2(to_real(dec.plus_vals[lp], 1.0 / L));
    }
    auto omega_of = [&](const SignedTernaryTree& tr, const std::vector<VecZ>& vals,
                        const std::vector<int32_t>& nodes) {
      std::vector<double> om;
      for (int32_t b : nodes) {
        VecZ z1 = vals[b] - vals[tr.nodes[b].child[0]];
        VecZ z3 = vals[b] - vals[tr.nodes[b].child[2]];
        om.push_back(tr.node_sign(b) * double(dot(z1, z3)) / (L * L));
      }
      return om;
    };
    cplx kp = theta(fp, omega_of(c.plus_tree, dec.plus_vals, pn)).eval(t);
    cplx km = theta(fm, omega_of(c.minus_tree, dec.minus_vals, mn)).eval(t);
    acc += w * kp * km;
    return true;
  });
  double pref = std::pow(L, -double(c.order) * (alpha + 2.0 * profile.d));
  return polarity(c) * pref * acc;
}

namespace {

// factor tree of a regular couple plus the per-slot recursion
struct FactorRecursion {
  const InitialProfile& profile;
  const ResonantRule& rule;

  double leaf_product(const VecR& k1, const VecR& k2, const VecR& k3) const {
    return profile.psi2(k1) * profile.psi2(k2) * profile.psi2(k3);
  }

  // M_q(k): trivial -> psi^2; composite -> int delta(Omega) prod M_{q_j}(k_j)
  double eval(const Couple& c, const VecR& k) const {
    if (c.order == 0) return profile.psi2(k);
    auto dec = regular_decompose(c);
    if (!dec) throw ValidationError("kinetic_limit_spectrum: couple is not regular");
    const Couple& q1 = dec->sub[0];
    const Couple& q2 = dec->sub[1];
    const Couple& q3 = dec->sub[2];
    return resonant_integral(rule, k, [&](const VecR& k1, const VecR& k2, const VecR& k3) {
      return eval(q1, k1) * eval(q2, k2) * eval(q3, k3);
    });
  }
};

void factor_forest_rec(const Couple& c, int parent, OrderedForest& f) {
  if (c.order == 0) return;
  auto dec = regular_decompose(c);
  if (!dec) throw ValidationError("factor tree: couple is not regular");
  int self = f.size();
  f.parent.push_back(parent);
  for (auto& sub : dec->sub) factor_forest_rec(sub, self, f);
}

}  // namespace

double factor_tree_volume(const Couple& c, double t) {
  if (c.order == 0) return 1.0;
  OrderedForest f;
  factor_forest_rec(c, -1, f);
  double v = double(linear_extension_count(f));
  for (int i = 1; i <= c.order; ++i) v *= t / double(i);
  return v;
}

double kinetic_limit_spectrum(const Couple& c, double t, const VecR& k,
                              const InitialProfile& profile, const ResonantRule& rule) {
  profile.validate();
  FactorRecursion rec{profile, rule};
  return factor_tree_volume(c, t) * rec.eval(c, k);
}

namespace {

struct InhomRecursion {
  const InitialProfile& profile;
  const ResonantRule& rule;
  bool transport_on;
  int time_order;

  double marginal(const Couple& c, double t, const VecR& k, const VecR& x) const {
    if (c.order == 0) return profile.phi2(x, k);
    auto dec = regular_decompose(c);
    if (!dec) throw ValidationError("kinetic_limit_marginal_inhom: couple is not regular");
    std::vector<double> gx, gw;
    gauss_legendre_01(time_order, gx, gw);
    double acc = 0;
    for (int i = 0; i < time_order; ++i) {
      double s = t * gx[i];
      double val = resonant_integral(rule, k, [&](const VecR& k1, const VecR& k2, const VecR& k3) {
        const VecR* ks[3] = {&k1, &k2, &k3};
        double prod = 1;
        for (int j = 0; j < 3; ++j) {
          VecR xj = x;
          if (transport_on) xj += s * (k - *ks[j]);
          prod *= marginal(dec->sub[j], s, *ks[j], xj);
        }
        return prod;
      });
      acc += t * gw[i] * val;
    }
    return acc;
  }

  // E_q(t,k,x,zeta); children of the top split are required trivial so that
  // the zeta convolution closes in the Gaussian family, otherwise we fall
  // back to a tensor grid (slow; small orders only).
  double evaluate(const Couple& c, double t, const VecR& k, const VecR& x,
                  const VecR& zeta) const {
    if (c.order == 0) return wigner(profile, k, x, zeta);
    auto dec = regular_decompose(c);
    if (!dec) throw ValidationError("kinetic_limit_spectrum_inhom: couple is not regular");
    bool all_trivial = true;
    for (auto& sub : dec->sub) all_trivial &= (sub.order == 0);
    std::vector<double> gx, gw;
    gauss_legendre_01(time_order, gx, gw);
    double acc = 0;
    for (int i = 0; i < time_order; ++i) {
      double s = t * gx[i];
      double val = resonant_integral(rule, k, [&](const VecR& k1, const VecR& k2, const VecR& k3) {
        const VecR* ks[3] = {&k1, &k2, &k3};
        VecR xj[3];
        for (int j = 0; j < 3; ++j) {
          xj[j] = x;
          if (transport_on) xj[j] += s * (k - *ks[j]);
        }
        if (all_trivial) return zeta_conv_gaussian(*ks[0], *ks[1], *ks[2], xj, zeta);
        return zeta_conv_grid(dec->sub, s, *ks[0], *ks[1], *ks[2], xj, zeta);
      });
      acc += t * gw[i] * val;
    }
    return acc;
  }

  // closed form of int_{zeta1 - zeta2 + zeta3 = zeta} prod_j W[phi(.,k_j)](x_j, zeta_j)
  double zeta_conv_gaussian(const VecR& k1, const VecR& k2, const VecR& k3, const VecR xj[3],
                            const VecR& zeta) const {
    double a = profile.a;
    int d = profile.d;
    double cc = 2.0 * kPi * kPi / a;
    double pref = profile.psi2(k1) * profile.psi2(k2) * profile.psi2(k3);
    pref *= std::exp(-2.0 * a * (norm2(xj[0]) + norm2(xj[1]) + norm2(xj[2])));
    pref *= std::pow(2.0 * kPi / a, 1.5 * d);
    pref *= std::pow(kPi / (std::sqrt(3.0) * cc), d);
    return pref * std::exp(-cc * norm2(zeta) / 3.0);
  }

  double zeta_conv_grid(const std::array<Couple, 3>& sub, double s, const VecR& k1,
                        const VecR& k2, const VecR& k3, const VecR xj[3],
                        const VecR& zeta) const {
    // direct tensor sum over (zeta1, zeta3) on a uniform grid
    const int m = 7;
    const double zmax = 3.0 * std::sqrt(profile.a) / kPi;
    const double h = 2 * zmax / (m - 1);
    int d = profile.d;
    const VecR* ks[3] = {&k1, &k2, &k3};
    double acc = 0;
    std::vector<VecR> pts;
    VecR z(d);
    std::function<void(int)> build = [&](int axis) {
      if (axis == d) {
        pts.push_back(z);
        return;
      }
      for (int i = 0; i < m; ++i) {
        z.v[axis] = -zmax + i * h;
        build(axis + 1);
      }
    };
    build(0);
    for (const VecR& z1 : pts)
      for (const VecR& z3 : pts) {
        VecR z2 = z1 + z3 - zeta;
        double prod = evaluate(sub[0], s, *ks[0], xj[0], z1) *
                      evaluate(sub[1], s, *ks[1], xj[1], z2) *
                      evaluate(sub[2], s, *ks[2], xj[2], z3);
        acc += prod;
      }
    double cell = std::pow(h, 2 * d);
    return acc * cell;
  }
};

}  // namespace

double kinetic_limit_marginal_inhom(const Couple& c, double t, const VecR& k, const VecR& x,
                                    const InitialProfile& profile, const ResonantRule& rule,
                                    bool transport_on, int time_order) {
  profile.validate();
  InhomRecursion rec{profile, rule, transport_on, time_order};
  return rec.marginal(c, t, k, x);
}

double kinetic_limit_spectrum_inhom(const Couple& c, double t, const VecR& k, const VecR& x,
                                    const VecR& zeta, const InitialProfile& profile,
                                    const ResonantRule& rule, bool transport_on, int time_order) {
  profile.validate();
  InhomRecursion rec{profile, rule, transport_on, time_order};
  return rec.evaluate(c, t, k, x, zeta);
}

}  // namespace wicklab
