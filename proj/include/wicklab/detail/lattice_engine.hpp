#ifndef WICKLAB_DETAIL_LATTICE_ENGINE_HPP
#define WICKLAB_DETAIL_LATTICE_ENGINE_HPP

#include <algorithm>
#include <vector>

#include "wicklab/couples.hpp"
#include "wicklab/decorations.hpp"

// Low-level enumerator over lattice decorations of a couple.  One pair value
// is determined by the root constraint; the remaining pairs are scanned over
// the lattice ball, deepest pairs first so that branching-node constraints
// prune as early as possible.  Hooks (static dispatch) see:
//   bool on_omega(int bidx, int64_t omega_num)    numerator Omega * L^2
//   bool on_emit(const std::vector<VecZ>& pair_vals, const std::vector<int64_t>& omegas)
// Returning false from on_omega prunes the branch; from on_emit stops the run.

namespace wicklab::detail {

struct CoupleLatticePlan {
  int d = 3;
  int n_pairs = 0;
  int np = 0;  // plus tree size; global node index = id (plus) or np+id (minus)
  int n_nodes = 0;
  std::vector<int> pair_order;  // couple pair indices, dependent last
  std::vector<int> pair_sign;   // iota of the plus-tree leaf, per couple pair index

  struct Upd {
    int32_t node;
    int8_t sgn;
  };
  std::vector<std::vector<Upd>> updates;  // per couple pair index

  struct NodeCheck {
    int32_t node;
    int8_t node_sign;
    int32_t c1, c3;  // global ids of first/third child (branching only)
    int bidx;        // index into branching_refs order, -1 for leaves
  };
  std::vector<std::vector<NodeCheck>> checks;  // per assignment step
  int n_branching = 0;

  static CoupleLatticePlan build(const Couple& c);
};

inline CoupleLatticePlan CoupleLatticePlan::build(const Couple& c) {
  CoupleLatticePlan plan;
  plan.n_pairs = c.pair_count();
  plan.np = c.plus_tree.size();
  plan.n_nodes = plan.np + c.minus_tree.size();

  // Assignment order: greedily finish branching nodes with the smallest leaf
  // support first, so the resonance-window checks prune as early as possible.
  {
    auto refs = branching_refs(c);
    std::vector<uint64_t> support(refs.size(), 0);
    for (size_t b = 0; b < refs.size(); ++b) {
      const auto& r = refs[b];
      const SignedTernaryTree& t = c.tree(r.tree);
      for (int p = 0; p < plan.n_pairs; ++p) {
        int32_t leaf = (r.tree == 0) ? c.pairing[p].first : c.pairing[p].second;
        if (t.is_ancestor_or_self(r.id, leaf)) support[b] |= (1ull << p);
      }
    }
    std::vector<size_t> node_order(refs.size());
    for (size_t i = 0; i < refs.size(); ++i) node_order[i] = i;
    std::sort(node_order.begin(), node_order.end(), [&](size_t a, size_t b) {
      int ca = __builtin_popcountll(support[a]), cb = __builtin_popcountll(support[b]);
      return ca != cb ? ca < cb : a < b;
    });
    std::vector<char> scheduled(plan.n_pairs, 0);
    for (size_t b : node_order)
      for (int p = 0; p < plan.n_pairs; ++p)
        if ((support[b] >> p) & 1 && !scheduled[p]) {
          plan.pair_order.push_back(p);
          scheduled[p] = 1;
        }
    for (int p = 0; p < plan.n_pairs; ++p)
      if (!scheduled[p]) plan.pair_order.push_back(p);
  }

  plan.pair_sign.resize(plan.n_pairs);
  plan.updates.resize(plan.n_pairs);
  std::vector<int> node_step(plan.n_nodes, -1);
  std::vector<int> step_of_pair(plan.n_pairs);
  for (int s = 0; s < plan.n_pairs; ++s) step_of_pair[plan.pair_order[s]] = s;
  for (int p = 0; p < plan.n_pairs; ++p) {
    auto [lp, lm] = c.pairing[p];
    plan.pair_sign[p] = c.plus_tree.node_sign(lp);
    for (int32_t a = lp; a >= 0; a = c.plus_tree.nodes[a].parent) {
      plan.updates[p].push_back({a, static_cast<int8_t>(c.plus_tree.node_sign(lp))});
      node_step[a] = std::max(node_step[a], step_of_pair[p]);
    }
    for (int32_t a = lm; a >= 0; a = c.minus_tree.nodes[a].parent) {
      plan.updates[p].push_back(
          {static_cast<int32_t>(plan.np + a), static_cast<int8_t>(c.minus_tree.node_sign(lm))});
      node_step[plan.np + a] = std::max(node_step[plan.np + a], step_of_pair[p]);
    }
  }

  plan.checks.resize(plan.n_pairs);
  auto refs = branching_refs(c);
  plan.n_branching = static_cast<int>(refs.size());
  for (int b = 0; b < plan.n_branching; ++b) {
    const auto& r = refs[b];
    const SignedTernaryTree& t = c.tree(r.tree);
    int32_t base = (r.tree == 0) ? 0 : plan.np;
    NodeCheck nc;
    nc.node = base + r.id;
    nc.node_sign = static_cast<int8_t>(t.node_sign(r.id));
    nc.c1 = base + t.nodes[r.id].child[0];
    nc.c3 = base + t.nodes[r.id].child[2];
    nc.bidx = b;
    plan.checks[node_step[nc.node]].push_back(nc);
  }
  return plan;
}

std::vector<VecZ> lattice_ball(int d, int64_t r2max);

template <class Hooks>
bool run_lattice_enum(const CoupleLatticePlan& plan, const Couple& c, const VecZ& k,
                      const std::vector<VecZ>& ball, int64_t r2max, Hooks& hooks,
                      size_t first_lo = 0, size_t first_hi = SIZE_MAX) {
  const int P = plan.n_pairs;
  std::vector<VecZ> acc(plan.n_nodes, VecZ(k.d));
  std::vector<VecZ> pair_vals(P, VecZ(k.d));
  std::vector<int64_t> omegas(std::max(plan.n_branching, 1), 0);
  VecZ rsum(k.d);

  auto apply = [&](int p, const VecZ& v, int dir) {
    for (const auto& u : plan.updates[p]) {
      auto& a = acc[u.node];
      int s = dir * u.sgn;
      for (int i = 0; i < k.d; ++i) a.v[i] += s * v.v[i];
    }
    for (int i = 0; i < k.d; ++i) rsum.v[i] += dir * plan.pair_sign[p] * v.v[i];
  };

  // 0 = prune this branch, 1 = ok
  auto run_checks = [&](int step) -> int {
    for (const auto& nc : plan.checks[step]) {
      const VecZ& a = acc[nc.node];
      if (norm2(a) > r2max) return 0;
      // acc holds s(n) v_n; the outer children carry the node's own sign, so
      // Omega_b = s(b) (v_b - v_c1).(v_b - v_c3) = s(b) (a_b - a_c1).(a_b - a_c3)
      VecZ z1(k.d), z3(k.d);
      for (int i = 0; i < k.d; ++i) {
        z1.v[i] = a.v[i] - acc[nc.c1].v[i];
        z3.v[i] = a.v[i] - acc[nc.c3].v[i];
      }
      int64_t om = nc.node_sign * dot(z1, z3);
      if (!hooks.on_omega(nc.bidx, om)) return 0;
      omegas[nc.bidx] = om;
    }
    return 1;
  };

  int dep = plan.pair_order[P - 1];
  auto rec = [&](auto&& self, int step) -> bool {  // false = stop everything
    if (step == P - 1) {
      VecZ v(k.d);
      for (int i = 0; i < k.d; ++i)
        v.v[i] = plan.pair_sign[dep] * (k.v[i] - rsum.v[i]);
      if (norm2(v) > r2max) return true;
      pair_vals[dep] = v;
      apply(dep, v, +1);
      int st = run_checks(step);
      bool cont = true;
      if (st == 1) cont = hooks.on_emit(pair_vals, omegas);
      apply(dep, v, -1);
      return cont;
    }
    int p = plan.pair_order[step];
    size_t lo = (step == 0) ? std::min(first_lo, ball.size()) : 0;
    size_t hi = (step == 0) ? std::min(first_hi, ball.size()) : ball.size();
    for (size_t bi = lo; bi < hi; ++bi) {
      const VecZ& v = ball[bi];
      pair_vals[p] = v;
      apply(p, v, +1);
      if (run_checks(step) == 1) {
        if (!self(self, step + 1)) {
          apply(p, v, -1);
          return false;
        }
      }
      apply(p, v, -1);
    }
    return true;
  };
  if (P == 1) {
    // single pair: the dependent assignment is the whole enumeration
    if (first_lo > 0) return true;
    return rec(rec, 0);
  }
  return rec(rec, 0);
}

}  // namespace wicklab::detail

#endif  // WICKLAB_DETAIL_LATTICE_ENGINE_HPP
