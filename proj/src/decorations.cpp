#include "wicklab/decorations.hpp"

#include <algorithm>
#include <numeric>

#include "wicklab/detail/lattice_engine.hpp"

namespace wicklab {

double resonance_factor(const VecR& k1, const VecR& k2, const VecR& k3) {
  if (k1.d != k2.d || k1.d != k3.d) throw ValidationError("resonance_factor: dimension mismatch");
  VecR k = k1 - k2 + k3;
  return dot(k - k1, k - k3);
}

int64_t resonance_factor(const VecZ& k1, const VecZ& k2, const VecZ& k3) {
  if (k1.d != k2.d || k1.d != k3.d) throw ValidationError("resonance_factor: dimension mismatch");
  VecZ k = k1 - k2 + k3;
  return dot(k - k1, k - k3);
}

std::vector<VecR> extend_leaf_values_tree(const SignedTernaryTree& t,
                                          const std::vector<VecR>& leaf_vals, DecoKind kind) {
  auto leaves = t.leaves();
  if (leaf_vals.size() != leaves.size())
    throw ValidationError("extend_leaf_values_tree: wrong number of leaf values");
  int d = leaf_vals.empty() ? 0 : leaf_vals[0].d;
  std::vector<VecR> vals(t.size(), VecR(d));
  for (size_t i = 0; i < leaves.size(); ++i) vals[leaves[i]] = leaf_vals[i];
  // bottom-up: post-order = reverse pre-order works since children have larger ids
  for (int32_t i = t.size() - 1; i >= 0; --i) {
    if (t.is_leaf(i)) continue;
    VecR acc(d);
    for (int j = 0; j < 3; ++j) {
      int32_t c = t.nodes[i].child[j];
      double w = (kind == DecoKind::D) ? double(t.node_sign(c)) : 1.0;
      for (int x = 0; x < d; ++x) acc.v[x] += w * vals[c].v[x];
    }
    double w = (kind == DecoKind::D) ? double(t.node_sign(i)) : 1.0;
    for (int x = 0; x < d; ++x) vals[i].v[x] = w * acc.v[x];
  }
  return vals;
}

Decoration extend_pair_values(const Couple& c, const std::vector<VecR>& pair_vals,
                              DecoKind kind) {
  if (static_cast<int>(pair_vals.size()) != c.pair_count())
    throw ValidationError("extend_pair_values: wrong number of pair values");
  auto pl = c.plus_tree.leaves();
  auto ml = c.minus_tree.leaves();
  std::vector<VecR> pv(pl.size()), mv(ml.size());
  std::vector<int32_t> ppos(c.plus_tree.size(), -1), mpos(c.minus_tree.size(), -1);
  for (size_t i = 0; i < pl.size(); ++i) ppos[pl[i]] = int32_t(i);
  for (size_t i = 0; i < ml.size(); ++i) mpos[ml[i]] = int32_t(i);
  for (int p = 0; p < c.pair_count(); ++p) {
    pv[ppos[c.pairing[p].first]] = pair_vals[p];
    mv[mpos[c.pairing[p].second]] = pair_vals[p];
  }
  Decoration dec;
  dec.kind = kind;
  dec.plus_vals = extend_leaf_values_tree(c.plus_tree, pv, kind);
  dec.minus_vals = extend_leaf_values_tree(c.minus_tree, mv, kind);
  return dec;
}

Decoration extend_leaf_values(const Couple& c, const std::vector<VecR>& plus_leaf_vals,
                              const std::vector<VecR>& minus_leaf_vals, DecoKind kind) {
  auto pl = c.plus_tree.leaves();
  auto ml = c.minus_tree.leaves();
  std::vector<int32_t> ppos(c.plus_tree.size(), -1), mpos(c.minus_tree.size(), -1);
  for (size_t i = 0; i < pl.size(); ++i) ppos[pl[i]] = int32_t(i);
  for (size_t i = 0; i < ml.size(); ++i) mpos[ml[i]] = int32_t(i);
  std::vector<VecR> pair_vals(c.pair_count());
  for (int p = 0; p < c.pair_count(); ++p) {
    const VecR& a = plus_leaf_vals[ppos[c.pairing[p].first]];
    const VecR& b = minus_leaf_vals[mpos[c.pairing[p].second]];
    for (int i = 0; i < a.d; ++i)
      if (std::abs(a.v[i] - b.v[i]) > 1e-12)
        throw ValidationError("extend_leaf_values: paired leaves carry different values");
    pair_vals[p] = a;
  }
  return extend_pair_values(c, pair_vals, kind);
}

std::vector<NodeRef> branching_refs(const Couple& c) {
  std::vector<NodeRef> refs;
  for (int32_t i : c.plus_tree.branching_nodes()) refs.push_back(NodeRef{0, i});
  for (int32_t i : c.minus_tree.branching_nodes()) refs.push_back(NodeRef{1, i});
  return refs;
}

double resonance_at(const Couple& c, const Decoration& dec, NodeRef b) {
  if (dec.kind != DecoKind::D) throw ValidationError("resonance_at: needs a D-decoration");
  const SignedTernaryTree& t = c.tree(b.tree);
  if (t.is_leaf(b.id)) throw ValidationError("resonance_at: not a branching node");
  const auto& vals = (b.tree == 0) ? dec.plus_vals : dec.minus_vals;
  const VecR& vb = vals[b.id];
  const VecR& v1 = vals[t.nodes[b.id].child[0]];
  const VecR& v3 = vals[t.nodes[b.id].child[2]];
  return t.node_sign(b.id) * dot(vb - v1, vb - v3);
}

std::vector<double> resonance_vector(const Couple& c, const Decoration& dec) {
  std::vector<double> out;
  for (const auto& b : branching_refs(c)) out.push_back(resonance_at(c, dec, b));
  return out;
}

RegularFactorBasis regular_factor_basis(const Couple& c) {
  auto part = conjugate_classes(c);
  RegularFactorBasis basis;
  for (auto& cls : part.classes) {
    if (cls.size() != 2) continue;
    NodeRef a = cls[0], b = cls[1];
    if (c.tree(a.tree).is_leaf(a.id) || c.tree(b.tree).is_leaf(b.id)) continue;
    int32_t p_id = (a.tree == 0) ? a.id : b.id;
    int32_t m_id = (a.tree == 0) ? b.id : a.id;
    basis.factor_nodes.emplace_back(p_id, m_id);
  }
  std::sort(basis.factor_nodes.begin(), basis.factor_nodes.end());
  if (static_cast<int>(basis.factor_nodes.size()) != c.order)
    throw ValidationError("regular_factor_basis: couple is not regular");
  return basis;
}

std::vector<std::pair<VecR, VecR>> coords_from_decoration(const Couple& c,
                                                          const RegularFactorBasis& basis,
                                                          const Decoration& dec) {
  std::vector<std::pair<VecR, VecR>> out;
  for (auto& [bp, bm] : basis.factor_nodes) {
    (void)bm;
    const VecR& vb = dec.plus_vals[bp];
    const VecR& v1 = dec.plus_vals[c.plus_tree.nodes[bp].child[0]];
    const VecR& v3 = dec.plus_vals[c.plus_tree.nodes[bp].child[2]];
    double s = c.plus_tree.node_sign(bp);
    out.emplace_back(s * (vb - v1), s * (vb - v3));
  }
  return out;
}

Decoration change_of_variables(const Couple& c, const RegularFactorBasis& basis, const VecR& root,
                               const std::vector<std::pair<VecR, VecR>>& coords) {
  if (coords.size() != basis.factor_nodes.size())
    throw ValidationError("change_of_variables: wrong number of coordinates");
  int d = root.d;
  std::vector<VecR> pvals(c.plus_tree.size(), VecR(d));
  std::vector<int> have(c.plus_tree.size(), 0);
  pvals[0] = root;
  have[0] = 1;
  std::vector<int> coord_of(c.plus_tree.size(), -1);
  for (size_t f = 0; f < basis.factor_nodes.size(); ++f)
    coord_of[basis.factor_nodes[f].first] = static_cast<int>(f);
  // top-down fill (pre-order ids increase downward)
  for (int32_t b = 0; b < c.plus_tree.size(); ++b) {
    if (c.plus_tree.is_leaf(b)) continue;
    if (!have[b]) throw ValidationError("change_of_variables: disconnected fill");
    int f = coord_of[b];
    if (f < 0) throw ValidationError("change_of_variables: branching node not in basis");
    double s = c.plus_tree.node_sign(b);
    const auto& [x, y] = coords[f];
    int32_t c1 = c.plus_tree.nodes[b].child[0];
    int32_t c2 = c.plus_tree.nodes[b].child[1];
    int32_t c3 = c.plus_tree.nodes[b].child[2];
    pvals[c1] = pvals[b] - s * x;
    pvals[c3] = pvals[b] - s * y;
    pvals[c2] = pvals[c1] + pvals[c3] - pvals[b];
    have[c1] = have[c2] = have[c3] = 1;
  }
  // pair values from the plus leaves, then fill the minus tree bottom-up
  std::vector<VecR> pair_vals(c.pair_count());
  std::vector<int32_t> ppos(c.plus_tree.size(), -1);
  for (int p = 0; p < c.pair_count(); ++p) pair_vals[p] = pvals[c.pairing[p].first];
  Decoration dec = extend_pair_values(c, pair_vals, DecoKind::D);
  dec.plus_vals = pvals;  // identical, but keeps the exact fill
  return dec;
}

std::vector<std::vector<int>> gamma_matrix(const Couple& c, NodeRef n) {
  int P = c.pair_count();
  std::vector<int> ind(P, 0);  // 1_{n >= l+} - 1_{n >= l-}
  for (int p = 0; p < P; ++p) {
    auto [lp, lm] = c.pairing[p];
    int sp = c.plus_tree.node_sign(lp);  // the +1-signed leaf is l+
    int above_p = (n.tree == 0) && c.plus_tree.is_ancestor_or_self(n.id, lp);
    int above_m = (n.tree == 1) && c.minus_tree.is_ancestor_or_self(n.id, lm);
    int v = above_p + above_m;  // at most one can hold
    if (v == 0) continue;
    // if the plus-tree leaf is the positive one, membership via it counts +1
    bool via_positive = (n.tree == 0) ? (sp > 0) : (sp < 0);
    ind[p] = via_positive ? +1 : -1;
  }
  std::vector<std::vector<int>> g(P, std::vector<int>(P, 0));
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j) g[i][j] = ind[i] * ind[j];
  return g;
}

// --- lattice enumeration ----------------------------------------------------

namespace detail {
std::vector<VecZ> lattice_ball(int d, int64_t r2max) {
  int64_t B = static_cast<int64_t>(std::sqrt(double(r2max)) + 1);
  while (B * B > r2max) --B;
  std::vector<VecZ> out;
  VecZ m(d);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      if (norm2(m) <= r2max) out.push_back(m);
      return;
    }
    for (int64_t x = -B; x <= B; ++x) {
      m.v[axis] = static_cast<int32_t>(x);
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}
}  // namespace detail

namespace {

struct CollectHooks {
  const Couple& c;
  const std::function<bool(const LatticeDecoration&)>& visit;
  const detail::CoupleLatticePlan& plan;
  int d;

  bool on_omega(int, int64_t) { return true; }
  bool on_emit(const std::vector<VecZ>& pair_vals, const std::vector<int64_t>&) {
    // rebuild full node values (exact integer extension)
    LatticeDecoration dec;
    dec.plus_vals.assign(c.plus_tree.size(), VecZ(d));
    dec.minus_vals.assign(c.minus_tree.size(), VecZ(d));
    for (int p = 0; p < c.pair_count(); ++p) {
      dec.plus_vals[c.pairing[p].first] = pair_vals[p];
      dec.minus_vals[c.pairing[p].second] = pair_vals[p];
    }
    auto fill = [this, &dec](const SignedTernaryTree& t, std::vector<VecZ>& vals) {
      for (int32_t i = t.size() - 1; i >= 0; --i) {
        if (t.is_leaf(i)) continue;
        VecZ acc(d);
        for (int j = 0; j < 3; ++j) {
          int32_t ch = t.nodes[i].child[j];
          int w = t.node_sign(ch);
          for (int x = 0; x < d; ++x) acc.v[x] += w * vals[ch].v[x];
        }
        int w = t.node_sign(i);
        for (int x = 0; x < d; ++x) vals[i].v[x] = w * acc.v[x];
      }
    };
    fill(c.plus_tree, dec.plus_vals);
    fill(c.minus_tree, dec.minus_vals);
    return visit(dec);
  }
};

void check_capacity(const Couple& c, const LatticeSpec& spec, uint64_t cap, size_t ball_size) {
  int free_pairs = c.pair_count() - 1;
  unsigned __int128 worst = 1;
  for (int i = 0; i < free_pairs; ++i) {
    worst *= ball_size;
    if (worst > (unsigned __int128)cap) throw CapacityError("lattice enumeration exceeds cap");
  }
  (void)spec;
}

}  // namespace

void enumerate_lattice_decorations(const Couple& c, const VecZ& k, const LatticeSpec& spec,
                                   const std::function<bool(const LatticeDecoration&)>& visit) {
  spec.validate();
  if (k.d != spec.d) throw ValidationError("enumerate_lattice_decorations: dimension mismatch");
  auto plan = detail::CoupleLatticePlan::build(c);
  auto ball = detail::lattice_ball(spec.d, spec.r2max());
  CollectHooks hooks{c, visit, plan, spec.d};
  detail::run_lattice_enum(plan, c, k, ball, spec.r2max(), hooks);
}

uint64_t count_lattice_decorations(const Couple& c, const VecZ& k, const LatticeSpec& spec,
                                   uint64_t cap) {
  spec.validate();
  auto plan = detail::CoupleLatticePlan::build(c);
  auto ball = detail::lattice_ball(spec.d, spec.r2max());
  check_capacity(c, spec, cap, ball.size());
  struct Hooks {
    uint64_t count = 0;
    bool on_omega(int, int64_t) { return true; }
    bool on_emit(const std::vector<VecZ>&, const std::vector<int64_t>&) {
      ++count;
      return true;
    }
  } hooks;
  detail::run_lattice_enum(plan, c, k, ball, spec.r2max(), hooks);
  return hooks.count;
}

uint64_t count_quasi_resonant(const Couple& c, const VecZ& k, const LatticeSpec& spec, double q_lo,
                              double q_hi, double gamma, uint64_t cap) {
  spec.validate();
  auto plan = detail::CoupleLatticePlan::build(c);
  auto ball = detail::lattice_ball(spec.d, spec.r2max());
  check_capacity(c, spec, cap, ball.size());
  double inv_l2 = 1.0 / (spec.L * spec.L);
  struct Hooks {
    double lo, hi, scale;
    uint64_t count = 0;
    bool on_omega(int, int64_t om) {
      double x = scale * double(om);
      return x >= lo && x <= hi;
    }
    bool on_emit(const std::vector<VecZ>&, const std::vector<int64_t>&) {
      ++count;
      return true;
    }
  };
  // partition by the first free pair value
  int nthreads = default_threads();
  std::vector<uint64_t> partial(nthreads, 0);
  size_t chunk = (ball.size() + nthreads - 1) / std::max(1, nthreads);
  std::vector<std::thread> pool;
  for (int tid = 0; tid < nthreads; ++tid) {
    size_t lo = tid * chunk, hi = std::min(ball.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, tid, lo, hi] {
      Hooks hooks{q_lo, q_hi, gamma * inv_l2, 0};
      detail::run_lattice_enum(plan, c, k, ball, spec.r2max(), hooks, lo, hi);
      partial[tid] = hooks.count;
    });
  }
  for (auto& th : pool) th.join();
  uint64_t total = 0;
  for (uint64_t v : partial) total += v;
  return total;
}

// --- exact integer linear algebra -------------------------------------------

__int128 det_bareiss(std::vector<std::vector<int64_t>> m) {
  size_t n = m.size();
  std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  __int128 prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

int rank_exact(std::vector<std::vector<int64_t>> m) {
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      __int128 f1 = a[r][c], f2 = a[i][c];
      for (size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] * f1 - a[r][j] * f2;
      // keep entries small
      __int128 g = 0;
      auto igcd = [](__int128 x, __int128 y) {
        if (x < 0) x = -x;
        if (y < 0) y = -y;
        while (y) {
          __int128 t = x % y;
          x = y;
          y = t;
        }
        return x;
      };
      for (size_t j = 0; j < cols; ++j) g = igcd(g, a[i][j]);
      if (g > 1)
        for (size_t j = 0; j < cols; ++j) a[i][j] /= g;
    }
    ++r;
  }
  return static_cast<int>(r);
}

std::vector<std::vector<int64_t>> nullspace_exact(const std::vector<std::vector<int64_t>>& m) {
  if (m.empty()) return {};
  size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
  auto igcd = [](__int128 x, __int128 y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y) {
      __int128 t = x % y;
      x = y;
      y = t;
    }
    return x;
  };
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      __int128 f1 = a[r][c], f2 = a[i][c];
      for (size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] * f1 - a[r][j] * f2;
      __int128 g = 0;
      for (size_t j = 0; j < cols; ++j) g = igcd(g, a[i][j]);
      if (g > 1)
        for (size_t j = 0; j < cols; ++j) a[i][j] /= g;
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  std::vector<std::vector<int64_t>> basis;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    // x[fc] = prod of pivots; x[pivot_col[i]] = -a[i][fc] * (prod of other pivots)
    __int128 scale = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) scale *= a[i][pivot_col[i]];
    std::vector<__int128> x(cols, 0);
    x[fc] = scale;
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = -a[i][fc] * (scale / a[i][pivot_col[i]]);
    __int128 g = 0;
    for (auto& xi : x) g = igcd(g, xi);
    if (g > 1)
      for (auto& xi : x) xi /= g;
    std::vector<int64_t> xi64(cols);
    for (size_t j = 0; j < cols; ++j) xi64[j] = static_cast<int64_t>(x[j]);
    basis.push_back(std::move(xi64));
  }
  return basis;
}

}  // namespace wicklab
