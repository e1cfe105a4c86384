#ifndef WICKLAB_TREES_HPP
#define WICKLAB_TREES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wicklab/common.hpp"

namespace wicklab {

// Rooted ternary tree with a sign function.  Every non-leaf node has exactly
// three ordered children; child signs alternate as (s, -s, s).  Node ids are
// pre-order, root = 0, so shape strings double as canonical encodings.
struct SignedTernaryTree {
  struct Node {
    int32_t parent = -1;
    std::array<int32_t, 3> child{-1, -1, -1};
    int8_t sign = +1;
  };
  std::vector<Node> nodes;
  int order = 0;  // number of branching nodes

  int32_t root() const { return 0; }
  int size() const { return static_cast<int>(nodes.size()); }
  bool is_leaf(int32_t i) const { return nodes[i].child[0] < 0; }
  int sign() const { return nodes[0].sign; }
  int node_sign(int32_t i) const { return nodes[i].sign; }

  std::vector<int32_t> leaves() const;           // pre-order
  std::vector<int32_t> branching_nodes() const;  // pre-order
  // true iff a is an ancestor of b or a == b
  bool is_ancestor_or_self(int32_t a, int32_t b) const;

  // pre-order shape over {'b','l'}; together with the root sign this
  // determines the tree completely
  std::string shape_string() const;
};

SignedTernaryTree make_leaf_tree(int sign);

// Root of sign s with the three trees (signs s,-s,s) as child subtrees.
SignedTernaryTree tree_product(const SignedTernaryTree& t1, const SignedTernaryTree& t2,
                               const SignedTernaryTree& t3);

// Attach sub's root at the given leaf of base (signs must agree).  Returns the
// new tree plus the id the graft point received in it.
std::pair<SignedTernaryTree, int32_t> graft(const SignedTernaryTree& base, int32_t leaf,
                                            const SignedTernaryTree& sub);

// Inverse of graft at `node`: (lower subtree rooted there, upper tree with the
// node turned back into a leaf).
std::pair<SignedTernaryTree, SignedTernaryTree> split_tree(const SignedTernaryTree& t,
                                                           int32_t node);

// product over branching nodes of i*sign(b); one of {1,i,-1,-i}
cplx polarity(const SignedTernaryTree& t);

// Number of ternary tree shapes of order n: C(3n,n)/(2n+1).
uint64_t ternary_tree_count(int n);

// All trees of the given order and sign, canonically ordered (lexicographic
// shape string).  Throws CapacityError if the count exceeds `limit`.
std::vector<SignedTernaryTree> enumerate_trees(int n, int sign, uint64_t limit = 10'000'000);

}  // namespace wicklab

#endif  // WICKLAB_TREES_HPP
