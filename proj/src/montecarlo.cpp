#include "wicklab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wicklab/spectra.hpp"
#include "wicklab/timeorder.hpp"
#include "wicklab/trees.hpp"

namespace wicklab {

namespace {
bool lex_less(const VecZ& a, const VecZ& b) {
  for (int i = 0; i < a.d; ++i)
    if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
  return false;
}
}  // namespace

std::vector<VecZ> lattice_modes(const LatticeSpec& spec) {
  spec.validate();
  int64_t r2 = spec.r2max();
  int64_t B = int64_t(std::sqrt(double(r2)) + 1);
  while (B * B > r2) --B;
  std::vector<VecZ> out;
  VecZ m(spec.d);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == spec.d) {
      if (norm2(m) <= r2) out.push_back(m);
      return;
    }
    for (int64_t x = -B; x <= B; ++x) {
      m.v[axis] = int32_t(x);
      rec(axis + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

int GaussianField::index_of(const VecZ& m) const {
  auto it = std::lower_bound(modes.begin(), modes.end(), m, lex_less);
  if (it == modes.end() || !(*it == m)) return -1;
  return static_cast<int>(it - modes.begin());
}

GaussianField sample_field(const LatticeSpec& spec, uint64_t seed, uint64_t sample_index) {
  GaussianField f;
  f.spec = spec;
  f.seed = seed;
  f.sample_index = sample_index;
  f.modes = lattice_modes(spec);
  f.g.resize(f.modes.size());
  // one splitmix stream per (seed, sample, mode): insensitive to mode count
  for (size_t i = 0; i < f.modes.size(); ++i) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (sample_index + 1)), i);
    f.g[i] = rng.next_cgauss();
  }
  return f;
}

namespace {

// Wick-ordered product of three Gaussians g_{k1} conj(g_{k2}) g_{k3}
// classified by the mode coincidence pattern
enum Pattern3 : int8_t {
  kDistinct = 0,
  kEq12 = 1,  // k1 == k2 != k3
  kEq23 = 2,  // k2 == k3 != k1
  kEq13 = 3,  // k1 == k3 != k2
  kAll = 4,
};

inline cplx wick3(const cplx& g1, const cplx& g2, const cplx& g3, int8_t pattern) {
  switch (pattern) {
    case kDistinct:
      return g1 * std::conj(g2) * g3;
    case kEq12:
      return (std::norm(g1) - 1.0) * g3;
    case kEq23:
      return g1 * (std::norm(g3) - 1.0);
    case kEq13:
      return g1 * g1 * std::conj(g2);
    case kAll:
      return g1 * (std::norm(g1) - 2.0);
  }
  return 0;
}

// complex Hermite H_{p,q}(g) = Wick-ordered g^p conj(g)^q at E|g|^2 = 1
cplx hermite_pq(int p, int q, const cplx& g) {
  cplx acc(0, 0);
  double jfact = 1, cp = 1, cq = 1;
  for (int j = 0; j <= std::min(p, q); ++j) {
    if (j > 0) {
      jfact *= j;
      cp = cp * (p - j + 1) / j;
      cq = cq * (q - j + 1) / j;
    }
    double coef = ((j % 2) ? -1.0 : 1.0) * jfact * cp * cq;
    cplx term(coef, 0);
    for (int i = 0; i < p - j; ++i) term *= g;
    for (int i = 0; i < q - j; ++i) term *= std::conj(g);
    acc += term;
  }
  return acc;
}

}  // namespace

DysonKernel::DysonKernel(int n, double t, const VecZ& k, const LatticeSpec& spec, double alpha,
                         const InitialProfile& profile, uint64_t cap)
    : n_(n), k_(k) {
  if (n < 0 || n > 2) throw ValidationError("dyson_amplitude: only orders 0..2 are supported");
  profile.validate();
  auto modes = lattice_modes(spec);
  auto index_of = [&](const VecZ& m) {
    auto it = std::lower_bound(modes.begin(), modes.end(), m, lex_less);
    if (it == modes.end() || !(*it == m)) return -1;
    return static_cast<int>(it - modes.begin());
  };
  double L = spec.L;
  double inv_l2 = 1.0 / (L * L);
  if (n == 0) {
    k_mode_ = index_of(k);
    if (k_mode_ < 0) throw ValidationError("dyson_amplitude: k outside the mode truncation");
    psi_k_ = profile.psi(to_real(k, 1.0 / L));
    return;
  }
  double lam = std::pow(L, -alpha / 2.0);
  std::vector<double> psi(modes.size());
  for (size_t i = 0; i < modes.size(); ++i) psi[i] = profile.psi(to_real(modes[i], 1.0 / L));

  if (n == 1) {
    if ((unsigned __int128)modes.size() * modes.size() > cap)
      throw CapacityError("dyson_amplitude: kernel too large");
    double pref = lam * std::pow(L, -double(profile.d));
    terms_.reserve(modes.size() * modes.size() / 2);
    for (size_t i1 = 0; i1 < modes.size(); ++i1)
      for (size_t i3 = 0; i3 < modes.size(); ++i3) {
        VecZ k2 = modes[i1] + modes[i3] - k;
        int i2 = index_of(k2);
        if (i2 < 0) continue;
        int64_t om_num = resonance_factor(modes[i1], k2, modes[i3]);
        double om = double(om_num) * inv_l2;
        cplx theta1 = (std::abs(om) < kResonanceTol)
                          ? cplx(t, 0)
                          : (std::polar(1.0, kTwoPi * t * om) - 1.0) / cplx(0, kTwoPi * om);
        int8_t pat = kDistinct;
        bool e12 = (int(i1) == i2), e23 = (i2 == int(i3)), e13 = (i1 == i3);
        if (e12 && e23)
          pat = kAll;
        else if (e12)
          pat = kEq12;
        else if (e23)
          pat = kEq23;
        else if (e13)
          pat = kEq13;
        Term term;
        term.i1 = int32_t(i1);
        term.i2 = int32_t(i2);
        term.i3 = int32_t(i3);
        term.pattern = pat;
        term.coef = cplx(0, 1) * pref * theta1 * (psi[i1] * psi[size_t(i2)] * psi[i3]);
        terms_.push_back(term);
      }
    return;
  }

  // n == 2: three positive trees, five leaves each
  if ((unsigned __int128)modes.size() * modes.size() * modes.size() * modes.size() > cap)
    throw CapacityError("dyson_amplitude: order-2 kernel too large");
  double pref = lam * lam * std::pow(L, -2.0 * profile.d);
  auto trees = enumerate_trees(2, +1);
  bool first_tree = true;
  for (const auto& tree : trees) {
    auto leaves = tree.leaves();
    std::array<int8_t, 5> signs{};
    for (int i = 0; i < 5; ++i) signs[i] = int8_t(tree.node_sign(leaves[i]));
    if (first_tree) {
      signs5_ = signs;
      first_tree = false;
    } else if (signs != signs5_) {
      // pre-order leaf signs agree across the order-2 shapes; the shared
      // per-mode multiplicity bookkeeping in evaluate() relies on it
      throw ValidationError("dyson_amplitude: unexpected leaf sign pattern");
    }
    std::vector<int32_t> bn;
    // forest of branching nodes for the time kernel
    OrderedForest forest;
    {
      bn = tree.branching_nodes();
      std::vector<int32_t> idx(tree.size(), -1);
      for (size_t i = 0; i < bn.size(); ++i) idx[bn[i]] = int32_t(i);
      forest.parent.resize(bn.size());
      for (size_t i = 0; i < bn.size(); ++i) {
        int32_t a = tree.nodes[bn[i]].parent;
        while (a >= 0 && tree.is_leaf(a)) a = tree.nodes[a].parent;
        forest.parent[i] = (a < 0) ? -1 : idx[a];
      }
    }
    cplx sigma = polarity(tree);
    std::map<std::pair<int64_t, int64_t>, cplx> theta_memo;
    // enumerate leaf decorations: 4 free leaves, the last sign-(+) leaf fixed
    // by the root constraint
    int dep = -1;
    for (int i = 4; i >= 0; --i)
      if (signs5_[i] > 0) {
        dep = i;
        break;
      }
    std::array<int, 4> free_slots{};
    int nf = 0;
    for (int i = 0; i < 5; ++i)
      if (i != dep) free_slots[nf++] = i;
    std::array<int32_t, 5> mi{};
    std::array<VecZ, 5> mv{};
    std::function<void(int, VecZ)> rec = [&](int slot, VecZ acc) {
      if (slot == 4) {
        // dependent leaf: signed sum of leaf values = k
        VecZ v = k;
        for (int i = 0; i < 5; ++i) {
          if (i == dep) continue;
          if (signs5_[i] > 0)
            v -= mv[i];
          else
            v += mv[i];
        }
        int idep = index_of(v);
        if (idep < 0) return;
        mi[dep] = idep;
        mv[dep] = v;
        // node values bottom-up, resonances at the two branching nodes
        std::vector<VecZ> vals(tree.size(), VecZ(k.d));
        for (int i = 0; i < 5; ++i) vals[leaves[i]] = mv[i];
        for (int32_t b = tree.size() - 1; b >= 0; --b) {
          if (tree.is_leaf(b)) continue;
          VecZ a2(k.d);
          for (int j = 0; j < 3; ++j) {
            int32_t ch = tree.nodes[b].child[j];
            int w = tree.node_sign(ch);
            for (int x = 0; x < k.d; ++x) a2.v[x] += w * vals[ch].v[x];
          }
          int w = tree.node_sign(b);
          for (int x = 0; x < k.d; ++x) vals[b].v[x] = w * a2.v[x];
        }
        std::array<int64_t, 2> om{};
        for (size_t bi = 0; bi < bn.size(); ++bi) {
          int32_t b = bn[bi];
          VecZ z1 = vals[b] - vals[tree.nodes[b].child[0]];
          VecZ z3 = vals[b] - vals[tree.nodes[b].child[2]];
          om[bi] = tree.node_sign(b) * dot(z1, z3);
        }
        cplx th;
        auto key = std::make_pair(om[0], om[1]);
        auto it = theta_memo.find(key);
        if (it != theta_memo.end()) {
          th = it->second;
        } else {
          std::vector<double> w = {double(om[0]) * inv_l2, double(om[1]) * inv_l2};
          th = theta(forest, w).eval(t);
          theta_memo.emplace(key, th);
        }
        double pw = 1;
        for (int i = 0; i < 5; ++i) pw *= psi[size_t(mi[i])];
        Term5 t5;
        for (int i = 0; i < 5; ++i) t5.idx[i] = mi[i];
        t5.coef = sigma * pref * th * pw;
        terms5_.push_back(t5);
        return;
      }
      int i = free_slots[slot];
      for (size_t mo = 0; mo < modes.size(); ++mo) {
        mi[i] = int32_t(mo);
        mv[i] = modes[mo];
        rec(slot + 1, acc);
      }
    };
    rec(0, VecZ(k.d));
  }
}

cplx DysonKernel::evaluate(const GaussianField& field) const {
  if (n_ == 0) return psi_k_ * field.g[k_mode_];
  if (n_ == 1) {
    cplx acc(0, 0);
    for (const auto& t : terms_)
      acc += t.coef * wick3(field.g[t.i1], field.g[t.i2], field.g[t.i3], t.pattern);
    return acc;
  }
  cplx acc(0, 0);
  for (const auto& t : terms5_) {
    // per-mode multiplicities (p = unconjugated, q = conjugated)
    std::array<int32_t, 5> order = t.idx;
    cplx prod(1, 0);
    std::array<bool, 5> used{};
    for (int i = 0; i < 5; ++i) {
      if (used[i]) continue;
      int p = 0, q = 0;
      for (int j = i; j < 5; ++j) {
        if (t.idx[j] != t.idx[i]) continue;
        used[j] = true;
        if (signs5_[j] > 0)
          ++p;
        else
          ++q;
      }
      prod *= hermite_pq(p, q, field.g[t.idx[i]]);
    }
    (void)order;
    acc += t.coef * prod;
  }
  return acc;
}

cplx dyson_amplitude(int n, double t, const VecZ& k, const GaussianField& field, double alpha,
                     const InitialProfile& profile, uint64_t cap) {
  DysonKernel kernel(n, t, k, field.spec, alpha, profile, cap);
  return kernel.evaluate(field);
}

WickReport wick_crosscheck(int n, int n2, double t, const VecZ& k, const VecZ& k2,
                           const LatticeSpec& spec, double alpha, const InitialProfile& profile,
                           uint64_t nsamples, uint64_t seed, int threads) {
  if (nsamples < 2) throw ValidationError("wick_crosscheck: need at least 2 samples");
  DysonKernel ka(n, t, k, spec, alpha, profile);
  DysonKernel kb(n2, t, k2, spec, alpha, profile);

  int nthreads = threads > 0 ? threads : default_threads();
  std::vector<cplx> sum1(nthreads, cplx(0, 0));
  std::vector<double> sum_re2(nthreads, 0), sum_im2(nthreads, 0);
  int64_t chunk = int64_t((nsamples + nthreads - 1) / nthreads);
  std::vector<std::thread> pool;
  for (int tid = 0; tid < nthreads; ++tid) {
    uint64_t lo = uint64_t(tid) * chunk, hi = std::min<uint64_t>(nsamples, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, tid, lo, hi] {
      for (uint64_t i = lo; i < hi; ++i) {
        GaussianField f = sample_field(spec, seed, i);
        cplx v = ka.evaluate(f) * std::conj(kb.evaluate(f));
        sum1[tid] += v;
        sum_re2[tid] += v.real() * v.real();
        sum_im2[tid] += v.imag() * v.imag();
      }
    });
  }
  for (auto& th : pool) th.join();
  cplx s1(0, 0);
  double re2 = 0, im2 = 0;
  for (int tid = 0; tid < nthreads; ++tid) {
    s1 += sum1[tid];
    re2 += sum_re2[tid];
    im2 += sum_im2[tid];
  }
  WickReport rep;
  rep.nsamples = nsamples;
  rep.mc_estimate = s1 / double(nsamples);
  double var_re = std::max(0.0, re2 / nsamples - rep.mc_estimate.real() * rep.mc_estimate.real());
  double var_im = std::max(0.0, im2 / nsamples - rep.mc_estimate.imag() * rep.mc_estimate.imag());
  rep.stderr_re = std::sqrt(var_re / double(nsamples));
  rep.stderr_im = std::sqrt(var_im / double(nsamples));

  rep.target = cplx(0, 0);
  if (n == n2 && k == k2) {
    cplx target(0, 0);
    for (auto& c : enumerate_couples(n))
      target += finite_L_spectrum(c, t, k, spec.L, alpha, profile, spec.radius);
    rep.target = target;
  }
  // degenerate components (identically zero samples, e.g. Im |J|^2) get a
  // floor tied to the estimate's scale instead of dividing rounding noise
  double scale = std::abs(rep.mc_estimate) + std::abs(rep.target) + 1e-300;
  double zr = std::abs(rep.mc_estimate.real() - rep.target.real()) /
              std::max(rep.stderr_re, 1e-13 * scale);
  double zi = std::abs(rep.mc_estimate.imag() - rep.target.imag()) /
              std::max(rep.stderr_im, 1e-13 * scale);
  rep.z = std::max(zr, zi);
  return rep;
}

}  // namespace wicklab
