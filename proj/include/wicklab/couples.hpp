#ifndef WICKLAB_COUPLES_HPP
#define WICKLAB_COUPLES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wicklab/trees.hpp"

namespace wicklab {

// Node address inside a couple: tree 0 = plus tree, 1 = minus tree.
struct NodeRef {
  int8_t tree = 0;
  int32_t id = 0;
  friend bool operator==(const NodeRef& a, const NodeRef& b) {
    return a.tree == b.tree && a.id == b.id;
  }
};

// Pair of signed ternary trees of equal order with a perfect matching of
// their leaves.  Every leaf pair joins the two trees and carries one leaf of
// each sign; pairs are stored as (plus-tree leaf, minus-tree leaf), sorted by
// the plus-tree leaf id.
struct Couple {
  SignedTernaryTree plus_tree;   // root sign +1
  SignedTernaryTree minus_tree;  // root sign -1
  std::vector<std::pair<int32_t, int32_t>> pairing;
  int order = 0;

  int pair_count() const { return static_cast<int>(pairing.size()); }
  const SignedTernaryTree& tree(int t) const { return t == 0 ? plus_tree : minus_tree; }
  int node_sign(NodeRef n) const { return tree(n.tree).node_sign(n.id); }
  // index of the pair containing a given leaf, -1 if not a leaf
  int pair_of_leaf(NodeRef leaf) const;
  std::string canonical_key() const;
};

Couple trivial_couple();
Couple make_couple(const SignedTernaryTree& plus, const SignedTernaryTree& minus,
                   const std::vector<std::pair<int32_t, int32_t>>& pairing);
void validate_couple(const Couple& c);
cplx polarity(const Couple& c);

// Conjugate classes: two nodes are conjugate when every leaf-pair ancestor set
// contains both or neither.  Classes have size 1 or 2; size-2 classes join
// opposite trees and opposite signs.
struct ConjugateClassPartition {
  std::vector<std::vector<NodeRef>> classes;
  // per node (tree, id) -> class index
  std::vector<std::vector<int32_t>> class_of;
  int size2_count() const;
};
ConjugateClassPartition conjugate_classes(const Couple& c);

// Attach `attachment` at the pair with index `pair_index` of `base`; the
// attachment's trees are grafted onto the two leaves of the pair, matching
// root signs to leaf signs, and the pair is replaced by the attachment's
// pairing.
Couple couple_product(const Couple& base, int pair_index, const Couple& attachment);

// Inverse of couple_product at a size-2 conjugate class of branching nodes:
// (inner couple spanned by the two subtrees, outer couple where the class
// becomes a leaf pair).
std::pair<Couple, Couple> split_at_class(const Couple& c, NodeRef a, NodeRef b);

struct IrreducibleFactorization {
  std::vector<Couple> factors;  // irreducible, orders >= 1
  int regular_index = 0;        // factors of order != 1
};
IrreducibleFactorization irreducible_factorization(const Couple& c);
bool is_regular(const Couple& c);

// Regular couples factor at the root: c = prod^sigma(q1,q2,q3) where the
// j-th child of the plus root pairs with the j-th (sigma=+1) or (4-j)-th
// (sigma=-1) child of the minus root.
struct RegularDecomposition {
  int sigma = +1;
  std::array<Couple, 3> sub;
};
std::optional<RegularDecomposition> regular_decompose(const Couple& c);
Couple regular_compose(int sigma, const Couple& q1, const Couple& q2, const Couple& q3);

uint64_t couple_count(int n);          // card(T_n)^2 (n+1)! n!
uint64_t regular_couple_count(int n);  // 2^n C(3n,n)/(2n+1)

// Streaming enumeration in canonical order; return false from the visitor to
// stop early.
void enumerate_couples(int n, const std::function<bool(const Couple&)>& visit);
std::vector<Couple> enumerate_couples(int n, uint64_t limit = 10'000'000);
void enumerate_regular_couples(int n, const std::function<bool(const Couple&)>& visit);
std::vector<Couple> enumerate_regular_couples(int n, uint64_t limit = 10'000'000);

// Uniformly random couple of order n (not necessarily regular).
Couple random_couple(int n, Rng& rng);

}  // namespace wicklab

#endif  // WICKLAB_COUPLES_HPP
