#include "doctest.h"
#include "wicklab/decorations.hpp"

#include <map>
#include <set>

using namespace wicklab;

namespace {

// closed-form oracle: s(n) v_n = sum over leaves below n of s(l) v_l (D-kind),
// v_n = sum v_l (C-kind); independent of the bottom-up fill
VecR closed_form_value(const SignedTernaryTree& t, const std::vector<VecR>& leaf_vals,
                       DecoKind kind, int32_t n) {
  auto leaves = t.leaves();
  int d = leaf_vals[0].d;
  VecR acc(d);
  for (size_t i = 0; i < leaves.size(); ++i) {
    if (!t.is_ancestor_or_self(n, leaves[i])) continue;
    double w = (kind == DecoKind::D) ? double(t.node_sign(leaves[i])) : 1.0;
    for (int x = 0; x < d; ++x) acc.v[x] += w * leaf_vals[i].v[x];
  }
  if (kind == DecoKind::D) {
    double w = t.node_sign(n);
    for (int x = 0; x < d; ++x) acc.v[x] *= w;
  }
  return acc;
}

VecR rand_vec(Rng& rng, int d) {
  VecR v(d);
  for (int i = 0; i < d; ++i) v[i] = 2.0 * rng.next_double() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("resonance factor") {
  VecR k1{1, 0, 0}, k2{0, 1, 0}, k3{0, 0, 1};
  CHECK_EQ(resonance_factor(k1, k1, k3), 0.0);  // k1 == k2 degenerate
  CHECK_EQ(resonance_factor(k1, k2, k3), 1.0);
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    VecR a = rand_vec(rng, 3), b = rand_vec(rng, 3), c = rand_vec(rng, 3);
    VecR k = a - b + c;
    double lhs = resonance_factor(a, b, c);
    double rhs = 0.5 * (norm2(k) - norm2(a) + norm2(b) - norm2(c));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  VecR bad{1, 0};
  CHECK_THROWS_AS(resonance_factor(k1, bad, k3), ValidationError);
}

TEST_CASE("extension: recursive fill equals the closed-form sum") {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    Couple c = random_couple(3, rng);
    for (DecoKind kind : {DecoKind::D, DecoKind::C}) {
      std::vector<VecR> pv(c.pair_count());
      for (auto& v : pv) v = rand_vec(rng, 3);
      Decoration dec = extend_pair_values(c, pv, kind);
      // per-tree leaf values
      auto pl = c.plus_tree.leaves();
      std::vector<VecR> plv(pl.size());
      for (size_t i = 0; i < pl.size(); ++i) plv[i] = dec.plus_vals[pl[i]];
      for (int32_t n = 0; n < c.plus_tree.size(); ++n) {
        VecR want = closed_form_value(c.plus_tree, plv, kind, n);
        for (int x = 0; x < 3; ++x) CHECK(std::abs(want.v[x] - dec.plus_vals[n].v[x]) < 1e-10);
      }
    }
  }
}

TEST_CASE("extension edge cases") {
  auto c = enumerate_couples(1)[0];
  // all-zero leaves extend to all-zero nodes
  std::vector<VecR> zeros(c.pair_count(), VecR{0.0, 0.0, 0.0});
  Decoration dec = extend_pair_values(c, zeros, DecoKind::D);
  for (auto& v : dec.plus_vals) CHECK_EQ(norm2(v), 0.0);
  // single nonzero leaf: node carries +-v exactly on the ancestor chain
  std::vector<VecR> one(c.pair_count(), VecR{0.0, 0.0, 0.0});
  one[1] = VecR{1.0, 2.0, 0.5};
  Decoration dec2 = extend_pair_values(c, one, DecoKind::D);
  int32_t leaf = c.pairing[1].first;
  for (int32_t n = 0; n < c.plus_tree.size(); ++n) {
    double got = std::abs(dec2.plus_vals[n].v[0]);
    if (c.plus_tree.is_ancestor_or_self(n, leaf))
      CHECK(std::abs(got - 1.0) < 1e-12);
    else
      CHECK_EQ(got, 0.0);
  }
  // pairing violation detection
  auto pl = c.plus_tree.leaves();
  auto ml = c.minus_tree.leaves();
  std::vector<VecR> pv(pl.size(), VecR{0.0, 0.0, 0.0}), mv(ml.size(), VecR{0.0, 0.0, 0.0});
  mv[0] = VecR{1.0, 0.0, 0.0};
  bool consistent = true;
  try {
    extend_leaf_values(c, pv, mv, DecoKind::D);
  } catch (const ValidationError&) {
    consistent = false;
  }
  CHECK_FALSE(consistent);
}

TEST_CASE("resonance vector: constants are in the kernel") {
  Rng rng(29);
  Couple c = random_couple(2, rng);
  VecR k{0.3, -0.7, 1.1};
  std::vector<VecR> pv(c.pair_count(), k);
  Decoration dec = extend_pair_values(c, pv, DecoKind::D);
  for (double om : resonance_vector(c, dec)) CHECK(std::abs(om) < 1e-12);
}

TEST_CASE("resonance vector on a K_1 couple matches the resonance factor") {
  auto c = enumerate_couples(1)[0];
  std::vector<VecR> pv(3);
  // order pairs by the plus-tree child they sit at
  for (int p = 0; p < 3; ++p) {
    int32_t leaf = c.pairing[p].first;
    int slot = 0;
    for (int j = 0; j < 3; ++j)
      if (c.plus_tree.nodes[0].child[j] == leaf) slot = j;
    VecR e(3);
    e[slot] = 1.0;
    pv[p] = e;
  }
  Decoration dec = extend_pair_values(c, pv, DecoKind::D);
  auto omegas = resonance_vector(c, dec);
  REQUIRE_EQ(omegas.size(), 2);
  CHECK(std::abs(omegas[0] - 1.0) < 1e-12);   // plus root
  CHECK(std::abs(omegas[0] + omegas[1]) < 1e-12);
}

TEST_CASE("regular couples: factor branching nodes carry opposite resonances") {
  Rng rng(31);
  for (auto& c : enumerate_regular_couples(2)) {
    auto basis = regular_factor_basis(c);
    REQUIRE_EQ(basis.count(), 2);
    std::vector<VecR> pv(c.pair_count());
    for (auto& v : pv) v = rand_vec(rng, 3);
    Decoration dec = extend_pair_values(c, pv, DecoKind::D);
    for (auto& [bp, bm] : basis.factor_nodes) {
      double op = resonance_at(c, dec, NodeRef{0, bp});
      double om = resonance_at(c, dec, NodeRef{1, bm});
      CHECK(std::abs(op + om) < 1e-10);
    }
  }
}

TEST_CASE("resonances are quadratic under scaling") {
  Rng rng(37);
  Couple c = random_couple(2, rng);
  std::vector<VecR> pv(c.pair_count()), pv2(c.pair_count());
  for (int i = 0; i < c.pair_count(); ++i) {
    pv[i] = rand_vec(rng, 3);
    pv2[i] = 3.0 * pv[i];
  }
  auto om1 = resonance_vector(c, extend_pair_values(c, pv, DecoKind::D));
  auto om2 = resonance_vector(c, extend_pair_values(c, pv2, DecoKind::D));
  for (size_t i = 0; i < om1.size(); ++i) CHECK(std::abs(om2[i] - 9.0 * om1[i]) < 1e-10);
}

TEST_CASE("conjugacy: ancestor criterion equals the decoration criterion") {
  // nodes are conjugate iff all integer decorations with unit-vector pair
  // values agree at them
  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    int n = 1 + int(rng.next_u64() % 4);
    Couple c = random_couple(n, rng);
    auto part = conjugate_classes(c);
    int P = c.pair_count();
    // signature per node: the vector of Z^P decoration values (D-kind)
    auto sig = [&](NodeRef nd) {
      std::vector<double> s;
      for (int p = 0; p < P; ++p) {
        std::vector<VecR> pv(P, VecR{0.0});
        pv[p] = VecR{1.0};
        Decoration dec = extend_pair_values(c, pv, DecoKind::D);
        s.push_back(dec.at(nd).v[0]);
      }
      return s;
    };
    std::map<std::vector<double>, std::set<std::pair<int, int>>> groups;
    for (int t = 0; t < 2; ++t)
      for (int32_t i = 0; i < c.tree(t).size(); ++i)
        groups[sig(NodeRef{int8_t(t), i})].insert({t, i});
    // group partition must equal the ancestor-criterion partition
    std::set<std::set<std::pair<int, int>>> a, b;
    for (auto& [s, g] : groups) a.insert(g);
    for (auto& cls : part.classes) {
      std::set<std::pair<int, int>> g;
      for (auto& nd : cls) g.insert({nd.tree, nd.id});
      b.insert(g);
    }
    CHECK(a == b);
  }
}

TEST_CASE("change of variables: kernel, roundtrip, unimodularity") {
  Rng rng(43);
  for (int n = 1; n <= 3; ++n) {
    auto regs = enumerate_regular_couples(n);
    for (size_t ci = 0; ci < regs.size(); ci += std::max<size_t>(1, regs.size() / 8)) {
      const Couple& c = regs[ci];
      auto basis = regular_factor_basis(c);
      REQUIRE_EQ(basis.count(), n);
      VecR k = rand_vec(rng, 3);

      // z = 0 -> constant decoration k
      std::vector<std::pair<VecR, VecR>> z0(n, {VecR{0.0, 0.0, 0.0}, VecR{0.0, 0.0, 0.0}});
      Decoration dec0 = change_of_variables(c, basis, k, z0);
      for (auto& v : dec0.plus_vals)
        for (int x = 0; x < 3; ++x) CHECK(std::abs(v.v[x] - k.v[x]) < 1e-12);

      // roundtrip coords -> decoration -> coords
      std::vector<std::pair<VecR, VecR>> z(n);
      for (auto& [x, y] : z) {
        x = rand_vec(rng, 3);
        y = rand_vec(rng, 3);
      }
      Decoration dec = change_of_variables(c, basis, k, z);
      auto back = coords_from_decoration(c, basis, dec);
      for (int f = 0; f < n; ++f)
        for (int x = 0; x < 3; ++x) {
          CHECK(std::abs(back[f].first.v[x] - z[f].first.v[x]) < 1e-10);
          CHECK(std::abs(back[f].second.v[x] - z[f].second.v[x]) < 1e-10);
        }

      // the map pair-values -> coords is a unimodular integer change of
      // variables (per axis), after quotienting by the root constraint
      int P = c.pair_count();
      // matrix: rows = coords (2n), cols = free pairs (first 2n of P, the last
      // is determined by the root constraint with value 0 and root k = 0)
      std::vector<std::vector<int64_t>> M(2 * n, std::vector<int64_t>(2 * n, 0));
      for (int p = 0; p < 2 * n; ++p) {
        std::vector<VecR> pv(P, VecR{0.0});
        pv[p] = VecR{1.0};
        // enforce root 0: solve dependent pair value
        double s_dep = 0, acc = 0;
        for (int q = 0; q < P; ++q) {
          int sq = c.plus_tree.node_sign(c.pairing[q].first);
          if (q == P - 1)
            s_dep = sq;
          else
            acc += sq * pv[q].v[0];
        }
        pv[P - 1] = VecR{(0.0 - acc) / s_dep};
        Decoration dec1 = extend_pair_values(c, pv, DecoKind::D);
        auto coords = coords_from_decoration(c, basis, dec1);
        for (int f = 0; f < n; ++f) {
          M[2 * f][p] = llround(coords[f].first.v[0]);
          M[2 * f + 1][p] = llround(coords[f].second.v[0]);
          CHECK(std::abs(coords[f].first.v[0] - double(M[2 * f][p])) < 1e-9);
        }
      }
      auto det = det_bareiss(M);
      CHECK_EQ(std::abs((long long)det), 1);
    }
  }
}

TEST_CASE("locally-constant criterion for linear relations among resonances") {
  // mu . Omega == 0 as a quadratic form on free pair values iff mu is constant
  // on each irreducible factor's branching set
  Rng rng(47);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + int(rng.next_u64() % 2);
    Couple c = random_couple(n, rng);
    auto refs = branching_refs(c);
    int B = static_cast<int>(refs.size());
    int P = c.pair_count();
    // represent 2*Omega_b as a symmetric integer matrix on pair values (d=1):
    // off-diagonals via polarization, kept doubled to stay integral
    auto omega_b_matrix = [&](int bi) {
      std::vector<std::vector<int64_t>> m(P, std::vector<int64_t>(P, 0));
      for (int p = 0; p <= P - 1; ++p)
        for (int q = p; q < P; ++q) {
          std::vector<VecR> e(P, VecR{0.0});
          e[p].v[0] += 1.0;
          e[q].v[0] += 1.0;
          double al = resonance_at(c, extend_pair_values(c, e, DecoKind::D), refs[bi]);
          std::vector<VecR> ep(P, VecR{0.0}), eq(P, VecR{0.0});
          ep[p].v[0] = 1.0;
          eq[q].v[0] = 1.0;
          double ap = resonance_at(c, extend_pair_values(c, ep, DecoKind::D), refs[bi]);
          double aq = resonance_at(c, extend_pair_values(c, eq, DecoKind::D), refs[bi]);
          if (p == q) {
            m[p][p] = llround(2 * ap);
          } else {
            m[p][q] = llround(al - ap - aq);
            m[q][p] = m[p][q];
          }
        }
      return m;
    };
    std::vector<std::vector<std::vector<int64_t>>> mats;
    for (int b = 0; b < B; ++b) mats.push_back(omega_b_matrix(b));
    // nullspace of the linear map mu -> sum_b mu_b M_b
    std::vector<std::vector<int64_t>> T;  // rows: matrix entries, cols: B
    for (int p = 0; p < P; ++p)
      for (int q = 0; q < P; ++q) {
        std::vector<int64_t> row(B);
        for (int b = 0; b < B; ++b) row[b] = mats[b][p][q];
        T.push_back(row);
      }
    auto null_basis = nullspace_exact(T);
    // kernel dimension = number of irreducible factors
    auto fac = irreducible_factorization(c);
    CHECK_EQ(null_basis.size(), fac.factors.size());
    for (auto& v : null_basis) {
      // sum_b v_b M_b must vanish
      for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q) {
          int64_t s = 0;
          for (int b = 0; b < B; ++b) s += v[b] * mats[b][p][q];
          CHECK_EQ(s, 0);
        }
    }
  }
}

TEST_CASE("lattice decorations: trivial couple") {
  LatticeSpec spec{1.0, 1, 1.0};
  uint64_t cnt = 0;
  enumerate_lattice_decorations(trivial_couple(), VecZ{0}, spec, [&](const LatticeDecoration& d) {
    ++cnt;
    CHECK_EQ(d.plus_vals[0].v[0], 0);
    return true;
  });
  CHECK_EQ(cnt, 1);
  // root outside the ball -> none
  cnt = 0;
  enumerate_lattice_decorations(trivial_couple(), VecZ{5}, spec,
                                [&](const LatticeDecoration&) {
                                  ++cnt;
                                  return true;
                                });
  CHECK_EQ(cnt, 0);
}

TEST_CASE("lattice decorations: K_1 at d=1, L=1, R=1 has exactly 7") {
  LatticeSpec spec{1.0, 1, 1.0};
  auto k1 = enumerate_couples(1);
  for (auto& c : k1) {
    CHECK_EQ(count_lattice_decorations(c, VecZ{0}, spec), 7);
    // brute-force oracle over the 9 candidate (k1,k3) values
    int expect = 0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        if (std::abs(a + b) <= 1) ++expect;
    CHECK_EQ(expect, 7);
  }
}

TEST_CASE("lattice decoration count scales with the free-coordinate dimension") {
  // order-n couple has 2n free d-vectors; with no interior-ball exclusions the
  // count would be (#ball)^{2n}, and exclusions keep it below
  LatticeSpec spec{2.0, 2, 1.0};
  auto ballsz = count_lattice_decorations(trivial_couple(), VecZ{0, 0}, spec);
  CHECK_EQ(ballsz, 1);
  auto k1 = enumerate_couples(1)[0];
  uint64_t c1 = count_lattice_decorations(k1, VecZ{0, 0}, spec);
  // #ball(d=2, radius 2 integer) = 13
  CHECK(c1 <= 13ull * 13ull);
  CHECK(c1 > 13ull);
}

TEST_CASE("quasi-resonant counting: gamma = 0 puts every decoration in the window") {
  LatticeSpec spec{2.0, 2, 1.0};
  auto k1 = enumerate_couples(1)[0];
  uint64_t all = count_lattice_decorations(k1, VecZ{0, 0}, spec);
  uint64_t win = count_quasi_resonant(k1, VecZ{0, 0}, spec, -1.0, 1.0, 0.0);
  CHECK_EQ(all, win);
  // a narrow window at positive gamma is a strict subset
  uint64_t narrow = count_quasi_resonant(k1, VecZ{0, 0}, spec, -1.0, 1.0, 64.0);
  CHECK(narrow < all);
  // exhaustive cross-check of the window count
  uint64_t expect = 0;
  const double gamma = 64.0, L = 2.0;
  for (int a0 = -2; a0 <= 2; ++a0)
    for (int a1 = -2; a1 <= 2; ++a1)
      for (int b0 = -2; b0 <= 2; ++b0)
        for (int b1 = -2; b1 <= 2; ++b1) {
          VecZ va{a0, a1}, vb{b0, b1};
          if (norm2(va) > 4 || norm2(vb) > 4) continue;
          VecZ mid = va + vb;  // k = 0
          if (norm2(mid) > 4) continue;
          double om = double(dot(va, vb)) / (L * L);
          if (std::abs(gamma * om) <= 1.0) ++expect;
        }
  CHECK_EQ(narrow, expect);
}

TEST_CASE("capacity guard on oversized scans") {
  LatticeSpec spec{8.0, 3, 2.0};
  auto k1 = enumerate_couples(1)[0];
  CHECK_THROWS_AS(count_lattice_decorations(k1, VecZ{0, 0, 0}, spec, 1000), CapacityError);
}
