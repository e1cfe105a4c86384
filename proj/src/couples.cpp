#include "wicklab/couples.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace wicklab {

namespace {

// Standalone copy of the subtree rooted at `root`; `map` gets src-id -> new-id
// (-1 outside the subtree).
SignedTernaryTree subtree_mapped(const SignedTernaryTree& src, int32_t root,
                                 std::vector<int32_t>& map) {
  map.assign(src.size(), -1);
  SignedTernaryTree out;
  struct Rec {
    const SignedTernaryTree& src;
    SignedTernaryTree& out;
    std::vector<int32_t>& map;
    int32_t walk(int32_t b, int32_t parent) {
      int32_t id = static_cast<int32_t>(out.nodes.size());
      out.nodes.emplace_back();
      out.nodes[id].parent = parent;
      out.nodes[id].sign = src.nodes[b].sign;
      map[b] = id;
      if (!src.is_leaf(b))
        for (int j = 0; j < 3; ++j) out.nodes[id].child[j] = walk(src.nodes[b].child[j], id);
      return id;
    }
  } rec{src, out, map};
  rec.walk(root, -1);
  out.order = 0;
  for (int32_t i = 0; i < out.size(); ++i)
    if (!out.is_leaf(i)) ++out.order;
  return out;
}

// Copy of src where descending stops at `cut` (it becomes a leaf).
SignedTernaryTree prune_mapped(const SignedTernaryTree& src, int32_t cut,
                               std::vector<int32_t>& map) {
  map.assign(src.size(), -1);
  SignedTernaryTree out;
  struct Rec {
    const SignedTernaryTree& src;
    SignedTernaryTree& out;
    std::vector<int32_t>& map;
    int32_t cut;
    int32_t walk(int32_t b, int32_t parent) {
      int32_t id = static_cast<int32_t>(out.nodes.size());
      out.nodes.emplace_back();
      out.nodes[id].parent = parent;
      out.nodes[id].sign = src.nodes[b].sign;
      map[b] = id;
      if (b != cut && !src.is_leaf(b))
        for (int j = 0; j < 3; ++j) out.nodes[id].child[j] = walk(src.nodes[b].child[j], id);
      return id;
    }
  } rec{src, out, map, cut};
  rec.walk(0, -1);
  out.order = 0;
  for (int32_t i = 0; i < out.size(); ++i)
    if (!out.is_leaf(i)) ++out.order;
  return out;
}

// graft with id maps for both inputs
SignedTernaryTree graft_mapped(const SignedTernaryTree& base, int32_t leaf,
                               const SignedTernaryTree& sub, std::vector<int32_t>& base_map,
                               std::vector<int32_t>& sub_map) {
  if (!base.is_leaf(leaf)) throw ValidationError("graft: target node is not a leaf");
  if (base.node_sign(leaf) != sub.sign())
    throw ValidationError("graft: leaf sign does not match subtree root sign");
  base_map.assign(base.size(), -1);
  sub_map.assign(sub.size(), -1);
  SignedTernaryTree out;
  struct Rec {
    const SignedTernaryTree& base;
    const SignedTernaryTree& sub;
    SignedTernaryTree& out;
    std::vector<int32_t>& base_map;
    std::vector<int32_t>& sub_map;
    int32_t leaf;
    int32_t walk_sub(int32_t b, int32_t parent) {
      int32_t id = static_cast<int32_t>(out.nodes.size());
      out.nodes.emplace_back();
      out.nodes[id].parent = parent;
      out.nodes[id].sign = sub.nodes[b].sign;
      sub_map[b] = id;
      if (!sub.is_leaf(b))
        for (int j = 0; j < 3; ++j) out.nodes[id].child[j] = walk_sub(sub.nodes[b].child[j], id);
      return id;
    }
    int32_t walk(int32_t b, int32_t parent) {
      if (b == leaf) {
        int32_t id = walk_sub(0, parent);
        base_map[b] = id;
        return id;
      }
      int32_t id = static_cast<int32_t>(out.nodes.size());
      out.nodes.emplace_back();
      out.nodes[id].parent = parent;
      out.nodes[id].sign = base.nodes[b].sign;
      base_map[b] = id;
      if (!base.is_leaf(b))
        for (int j = 0; j < 3; ++j) out.nodes[id].child[j] = walk(base.nodes[b].child[j], id);
      return id;
    }
  } rec{base, sub, out, base_map, sub_map, leaf};
  rec.walk(0, -1);
  out.order = base.order + sub.order;
  return out;
}

void sort_pairing(Couple& c) {
  std::sort(c.pairing.begin(), c.pairing.end());
}

}  // namespace

int Couple::pair_of_leaf(NodeRef leaf) const {
  for (int p = 0; p < pair_count(); ++p) {
    if (leaf.tree == 0 && pairing[p].first == leaf.id) return p;
    if (leaf.tree == 1 && pairing[p].second == leaf.id) return p;
  }
  return -1;
}

std::string Couple::canonical_key() const {
  std::string s = plus_tree.shape_string();
  s += '|';
  s += minus_tree.shape_string();
  s += '|';
  for (auto& pr : pairing) {
    s += std::to_string(pr.second);
    s += ',';
  }
  return s;
}

Couple trivial_couple() {
  Couple c;
  c.plus_tree = make_leaf_tree(+1);
  c.minus_tree = make_leaf_tree(-1);
  c.pairing = {{0, 0}};
  c.order = 0;
  return c;
}

Couple make_couple(const SignedTernaryTree& plus, const SignedTernaryTree& minus,
                   const std::vector<std::pair<int32_t, int32_t>>& pairing) {
  Couple c;
  c.plus_tree = plus;
  c.minus_tree = minus;
  c.pairing = pairing;
  c.order = plus.order;
  sort_pairing(c);
  validate_couple(c);
  return c;
}

void validate_couple(const Couple& c) {
  if (c.plus_tree.sign() != +1 || c.minus_tree.sign() != -1)
    throw ValidationError("couple: tree signs must be (+,-)");
  if (c.plus_tree.order != c.minus_tree.order)
    throw ValidationError("couple: trees must have equal order");
  int n = c.plus_tree.order;
  if (static_cast<int>(c.pairing.size()) != 2 * n + 1)
    throw ValidationError("couple: pairing must have 2n+1 pairs");
  std::vector<int> seen_p(c.plus_tree.size(), 0), seen_m(c.minus_tree.size(), 0);
  for (auto& [lp, lm] : c.pairing) {
    if (lp < 0 || lp >= c.plus_tree.size() || !c.plus_tree.is_leaf(lp))
      throw ValidationError("couple: pair member is not a plus-tree leaf");
    if (lm < 0 || lm >= c.minus_tree.size() || !c.minus_tree.is_leaf(lm))
      throw ValidationError("couple: pair member is not a minus-tree leaf");
    if (c.plus_tree.node_sign(lp) != -c.minus_tree.node_sign(lm))
      throw ValidationError("couple: paired leaves must have opposite signs");
    if (seen_p[lp]++ || seen_m[lm]++) throw ValidationError("couple: pairing is not a matching");
  }
}

cplx polarity(const Couple& c) { return polarity(c.plus_tree) * polarity(c.minus_tree); }

int ConjugateClassPartition::size2_count() const {
  int k = 0;
  for (auto& cl : classes)
    if (cl.size() == 2) ++k;
  return k;
}

ConjugateClassPartition conjugate_classes(const Couple& c) {
  int P = c.pair_count();
  if (P > 63) throw CapacityError("conjugate_classes: order too large for mask computation");
  std::vector<uint64_t> mask_p(c.plus_tree.size(), 0), mask_m(c.minus_tree.size(), 0);
  for (int p = 0; p < P; ++p) {
    for (int32_t a = c.pairing[p].first; a >= 0; a = c.plus_tree.nodes[a].parent)
      mask_p[a] |= (1ull << p);
    for (int32_t a = c.pairing[p].second; a >= 0; a = c.minus_tree.nodes[a].parent)
      mask_m[a] |= (1ull << p);
  }
  ConjugateClassPartition part;
  part.class_of = {std::vector<int32_t>(c.plus_tree.size(), -1),
                   std::vector<int32_t>(c.minus_tree.size(), -1)};
  std::unordered_map<uint64_t, int32_t> index;
  auto place = [&](int8_t tree, int32_t id, uint64_t m) {
    auto it = index.find(m);
    int32_t cls;
    if (it == index.end()) {
      cls = static_cast<int32_t>(part.classes.size());
      part.classes.emplace_back();
      index.emplace(m, cls);
    } else {
      cls = it->second;
    }
    part.classes[cls].push_back(NodeRef{tree, id});
    part.class_of[tree][id] = cls;
  };
  for (int32_t i = 0; i < c.plus_tree.size(); ++i) place(0, i, mask_p[i]);
  for (int32_t i = 0; i < c.minus_tree.size(); ++i) place(1, i, mask_m[i]);
  return part;
}

Couple couple_product(const Couple& base, int pair_index, const Couple& attachment) {
  if (pair_index < 0 || pair_index >= base.pair_count())
    throw ValidationError("couple_product: invalid pair index");
  auto [lp, lm] = base.pairing[pair_index];
  int slp = base.plus_tree.node_sign(lp);
  const SignedTernaryTree& into_plus = (slp == +1) ? attachment.plus_tree : attachment.minus_tree;
  const SignedTernaryTree& into_minus = (slp == +1) ? attachment.minus_tree : attachment.plus_tree;

  std::vector<int32_t> bp_map, sp_map, bm_map, sm_map;
  Couple out;
  out.plus_tree = graft_mapped(base.plus_tree, lp, into_plus, bp_map, sp_map);
  out.minus_tree = graft_mapped(base.minus_tree, lm, into_minus, bm_map, sm_map);
  out.order = base.order + attachment.order;
  for (int p = 0; p < base.pair_count(); ++p) {
    if (p == pair_index) continue;
    out.pairing.emplace_back(bp_map[base.pairing[p].first], bm_map[base.pairing[p].second]);
  }
  for (auto& [ap, am] : attachment.pairing) {
    if (slp == +1)
      out.pairing.emplace_back(sp_map[ap], sm_map[am]);
    else
      out.pairing.emplace_back(sp_map[am], sm_map[ap]);
  }
  sort_pairing(out);
  return out;
}

std::pair<Couple, Couple> split_at_class(const Couple& c, NodeRef a, NodeRef b) {
  if (a.tree == b.tree) throw ValidationError("split_at_class: nodes must be in opposite trees");
  int32_t node_p = (a.tree == 0) ? a.id : b.id;
  int32_t node_m = (a.tree == 0) ? b.id : a.id;
  int spos = c.plus_tree.node_sign(node_p);

  std::vector<int32_t> map_p, map_m;
  SignedTernaryTree sub_p = subtree_mapped(c.plus_tree, node_p, map_p);
  SignedTernaryTree sub_m = subtree_mapped(c.minus_tree, node_m, map_m);

  Couple inner;
  if (spos == +1) {
    inner.plus_tree = sub_p;
    inner.minus_tree = sub_m;
  } else {
    inner.plus_tree = sub_m;
    inner.minus_tree = sub_p;
  }
  inner.order = inner.plus_tree.order;

  std::vector<int32_t> umap_p, umap_m;
  Couple outer;
  outer.plus_tree = prune_mapped(c.plus_tree, node_p, umap_p);
  outer.minus_tree = prune_mapped(c.minus_tree, node_m, umap_m);
  outer.order = outer.plus_tree.order;

  for (auto& [lp, lm] : c.pairing) {
    bool inside = map_p[lp] >= 0;
    bool inside_m = map_m[lm] >= 0;
    if (inside != inside_m)
      throw ValidationError("split_at_class: class is not conjugate (pair straddles the cut)");
    if (inside) {
      if (spos == +1)
        inner.pairing.emplace_back(map_p[lp], map_m[lm]);
      else
        inner.pairing.emplace_back(map_m[lm], map_p[lp]);
    } else {
      outer.pairing.emplace_back(umap_p[lp], umap_m[lm]);
    }
  }
  outer.pairing.emplace_back(umap_p[node_p], umap_m[node_m]);
  sort_pairing(inner);
  sort_pairing(outer);
  if (inner.plus_tree.order != inner.minus_tree.order)
    throw ValidationError("split_at_class: unbalanced split, class is not conjugate");
  return {inner, outer};
}

namespace {

void factorize_rec(const Couple& c, std::vector<Couple>& out) {
  if (c.order == 0) return;
  auto part = conjugate_classes(c);
  for (auto& cls : part.classes) {
    if (cls.size() != 2) continue;
    NodeRef a = cls[0], b = cls[1];
    if (c.tree(a.tree).is_leaf(a.id) || c.tree(b.tree).is_leaf(b.id)) continue;
    if (a.id == 0 && b.id == 0) continue;  // root class
    auto [inner, outer] = split_at_class(c, a, b);
    factorize_rec(inner, out);
    factorize_rec(outer, out);
    return;
  }
  out.push_back(c);  // irreducible
}

}  // namespace

IrreducibleFactorization irreducible_factorization(const Couple& c) {
  IrreducibleFactorization f;
  factorize_rec(c, f.factors);
  for (auto& q : f.factors)
    if (q.order != 1) ++f.regular_index;
  return f;
}

bool is_regular(const Couple& c) { return irreducible_factorization(c).regular_index == 0; }

Couple regular_compose(int sigma, const Couple& q1, const Couple& q2, const Couple& q3) {
  Couple out;
  out.plus_tree = tree_product(q1.plus_tree, q2.minus_tree, q3.plus_tree);
  if (sigma > 0)
    out.minus_tree = tree_product(q1.minus_tree, q2.plus_tree, q3.minus_tree);
  else
    out.minus_tree = tree_product(q3.minus_tree, q2.plus_tree, q1.minus_tree);
  out.order = q1.order + q2.order + q3.order + 1;

  // pre-order copies place each child subtree at a contiguous offset
  int32_t off_p1 = 1;
  int32_t off_p2 = off_p1 + q1.plus_tree.size();
  int32_t off_p3 = off_p2 + q2.minus_tree.size();
  int32_t off_m1, off_m2, off_m3;
  if (sigma > 0) {
    off_m1 = 1;
    off_m2 = off_m1 + q1.minus_tree.size();
    off_m3 = off_m2 + q2.plus_tree.size();
  } else {
    off_m3 = 1;
    off_m2 = off_m3 + q3.minus_tree.size();
    off_m1 = off_m2 + q2.plus_tree.size();
  }
  for (auto& [ap, am] : q1.pairing) out.pairing.emplace_back(ap + off_p1, am + off_m1);
  for (auto& [ap, am] : q2.pairing) out.pairing.emplace_back(am + off_p2, ap + off_m2);
  for (auto& [ap, am] : q3.pairing) out.pairing.emplace_back(ap + off_p3, am + off_m3);
  sort_pairing(out);
  return out;
}

std::optional<RegularDecomposition> regular_decompose(const Couple& c) {
  if (c.order == 0) return std::nullopt;
  auto part = conjugate_classes(c);
  const auto& pr = c.plus_tree.nodes[0].child;
  const auto& mr = c.minus_tree.nodes[0].child;
  for (int sigma : {+1, -1}) {
    bool ok = true;
    for (int j = 0; j < 3 && ok; ++j) {
      int jm = (sigma > 0) ? j : 2 - j;
      ok = part.class_of[0][pr[j]] == part.class_of[1][mr[jm]];
    }
    if (!ok) continue;
    RegularDecomposition dec;
    dec.sigma = sigma;
    for (int j = 0; j < 3; ++j) {
      int jm = (sigma > 0) ? j : 2 - j;
      auto [inner, outer] = split_at_class(c, NodeRef{0, pr[j]}, NodeRef{1, mr[jm]});
      (void)outer;
      dec.sub[j] = inner;
    }
    return dec;
  }
  return std::nullopt;
}

uint64_t couple_count(int n) {
  unsigned __int128 v = ternary_tree_count(n);
  v *= ternary_tree_count(n);
  for (int i = 2; i <= n + 1; ++i) v *= unsigned(i);
  for (int i = 2; i <= n; ++i) v *= unsigned(i);
  if (v > (unsigned __int128)UINT64_MAX) throw CapacityError("couple_count: overflow");
  return static_cast<uint64_t>(v);
}

uint64_t regular_couple_count(int n) { return ternary_tree_count(n) << n; }

void enumerate_couples(int n, const std::function<bool(const Couple&)>& visit) {
  auto plus_trees = enumerate_trees(n, +1);
  auto minus_trees = enumerate_trees(n, -1);
  for (const auto& tp : plus_trees) {
    std::vector<int32_t> pos_p, neg_p;
    for (int32_t l : tp.leaves()) (tp.node_sign(l) > 0 ? pos_p : neg_p).push_back(l);
    for (const auto& tm : minus_trees) {
      std::vector<int32_t> neg_m, pos_m;
      for (int32_t l : tm.leaves()) (tm.node_sign(l) < 0 ? neg_m : pos_m).push_back(l);
      std::vector<int> perm1(pos_p.size()), perm2(neg_p.size());
      std::iota(perm1.begin(), perm1.end(), 0);
      do {
        std::iota(perm2.begin(), perm2.end(), 0);
        do {
          Couple c;
          c.plus_tree = tp;
          c.minus_tree = tm;
          c.order = n;
          for (size_t i = 0; i < pos_p.size(); ++i)
            c.pairing.emplace_back(pos_p[i], neg_m[perm1[i]]);
          for (size_t i = 0; i < neg_p.size(); ++i)
            c.pairing.emplace_back(neg_p[i], pos_m[perm2[i]]);
          sort_pairing(c);
          if (!visit(c)) return;
        } while (std::next_permutation(perm2.begin(), perm2.end()));
      } while (std::next_permutation(perm1.begin(), perm1.end()));
    }
  }
}

std::vector<Couple> enumerate_couples(int n, uint64_t limit) {
  if (couple_count(n) > limit)
    throw CapacityError("enumerate_couples: count exceeds enumeration limit");
  std::vector<Couple> out;
  out.reserve(couple_count(n));
  enumerate_couples(n, [&](const Couple& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

void enumerate_regular_couples(int n, const std::function<bool(const Couple&)>& visit) {
  // memoized lists per order < n; small because regular counts grow like 6^n
  std::vector<std::vector<Couple>> memo(std::max(n, 1));
  memo[0] = {trivial_couple()};
  for (int m = 1; m < n; ++m)
    for (int sigma : {+1, -1})
      for (int n1 = 0; n1 <= m - 1; ++n1)
        for (int n2 = 0; n2 + n1 <= m - 1; ++n2) {
          int n3 = m - 1 - n1 - n2;
          for (const auto& a : memo[n1])
            for (const auto& b : memo[n2])
              for (const auto& cc : memo[n3]) memo[m].push_back(regular_compose(sigma, a, b, cc));
        }
  if (n == 0) {
    visit(trivial_couple());
    return;
  }
  for (int sigma : {+1, -1})
    for (int n1 = 0; n1 <= n - 1; ++n1)
      for (int n2 = 0; n2 + n1 <= n - 1; ++n2) {
        int n3 = n - 1 - n1 - n2;
        for (const auto& a : memo[n1])
          for (const auto& b : memo[n2])
            for (const auto& cc : memo[n3])
              if (!visit(regular_compose(sigma, a, b, cc))) return;
      }
}

std::vector<Couple> enumerate_regular_couples(int n, uint64_t limit) {
  if (regular_couple_count(n) > limit)
    throw CapacityError("enumerate_regular_couples: count exceeds enumeration limit");
  std::vector<Couple> out;
  out.reserve(regular_couple_count(n));
  enumerate_regular_couples(n, [&](const Couple& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

Couple random_couple(int n, Rng& rng) {
  auto plus_trees = enumerate_trees(n, +1);
  auto minus_trees = enumerate_trees(n, -1);
  const auto& tp = plus_trees[rng.next_u64() % plus_trees.size()];
  const auto& tm = minus_trees[rng.next_u64() % minus_trees.size()];
  std::vector<int32_t> pos_p, neg_p, neg_m, pos_m;
  for (int32_t l : tp.leaves()) (tp.node_sign(l) > 0 ? pos_p : neg_p).push_back(l);
  for (int32_t l : tm.leaves()) (tm.node_sign(l) < 0 ? neg_m : pos_m).push_back(l);
  auto shuffle = [&rng](std::vector<int32_t>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.next_u64() % i]);
  };
  shuffle(neg_m);
  shuffle(pos_m);
  Couple c;
  c.plus_tree = tp;
  c.minus_tree = tm;
  c.order = n;
  for (size_t i = 0; i < pos_p.size(); ++i) c.pairing.emplace_back(pos_p[i], neg_m[i]);
  for (size_t i = 0; i < neg_p.size(); ++i) c.pairing.emplace_back(neg_p[i], pos_m[i]);
  sort_pairing(c);
  return c;
}

}  // namespace wicklab
