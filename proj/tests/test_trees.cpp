#include "doctest.h"
#include "wicklab/serialization.hpp"
#include "wicklab/trees.hpp"

#include <set>

using namespace wicklab;

TEST_CASE("tree counts match the generalized Catalan numbers") {
  // C(3n,n)/(2n+1)
  const uint64_t expected[] = {1, 1, 3, 12, 55, 273, 1428, 7752, 43263};
  for (int n = 0; n <= 8; ++n) CHECK_EQ(ternary_tree_count(n), expected[n]);
  for (int n = 0; n <= 5; ++n) {
    auto plus = enumerate_trees(n, +1);
    auto minus = enumerate_trees(n, -1);
    CHECK_EQ(plus.size(), expected[n]);
    CHECK_EQ(minus.size(), expected[n]);
  }
}

TEST_CASE("enumeration has no duplicates and is canonically ordered") {
  for (int n = 0; n <= 5; ++n) {
    auto trees = enumerate_trees(n, +1);
    std::set<std::string> keys;
    std::string prev;
    for (auto& t : trees) {
      auto s = t.shape_string();
      CHECK(keys.insert(s).second);
      if (!prev.empty()) CHECK(prev < s);
      prev = s;
    }
  }
}

TEST_CASE("sign rule and leaf-count invariants") {
  for (int sign : {+1, -1})
    for (int n = 0; n <= 4; ++n)
      for (auto& t : enumerate_trees(n, sign)) {
        CHECK_EQ(t.order, n);
        int pos = 0, neg = 0;
        for (int32_t l : t.leaves()) (t.node_sign(l) > 0 ? pos : neg)++;
        CHECK_EQ(t.leaves().size(), size_t(2 * n + 1));
        CHECK_EQ(sign > 0 ? pos : neg, n + 1);
        CHECK_EQ(sign > 0 ? neg : pos, n);
        for (int32_t i = 0; i < t.size(); ++i)
          if (!t.is_leaf(i))
            for (int j = 0; j < 3; ++j) {
              int expect = (j == 1) ? -t.node_sign(i) : t.node_sign(i);
              CHECK_EQ(t.node_sign(t.nodes[i].child[j]), expect);
            }
      }
}

TEST_CASE("tree product is the order-1 constructor") {
  auto p = make_leaf_tree(+1);
  auto m = make_leaf_tree(-1);
  auto t1 = tree_product(p, m, p);
  CHECK_EQ(t1.order, 1);
  CHECK_EQ(t1.shape_string(), "blll");
  auto first_order2 = tree_product(t1, m, p);
  CHECK_EQ(first_order2.order, 2);
  CHECK_EQ(first_order2.shape_string(), enumerate_trees(2, +1)[0].shape_string());
}

TEST_CASE("order additivity of tree product on random triples") {
  Rng rng(7);
  auto pool1 = enumerate_trees(1, +1);
  auto pool2 = enumerate_trees(2, +1);
  auto pool2m = enumerate_trees(2, -1);
  auto t = tree_product(pool2[1], pool2m[2], pool1[0]);
  CHECK_EQ(t.order, 2 + 2 + 1 + 1);
}

TEST_CASE("graft and split are inverse") {
  auto base = enumerate_trees(2, +1)[1];
  auto sub = enumerate_trees(1, +1)[0];
  // identity graft: attaching at the root of an order-0 tree
  auto t0 = make_leaf_tree(+1);
  auto [ident, at0] = graft(t0, 0, sub);
  CHECK_EQ(ident.shape_string(), sub.shape_string());
  CHECK_EQ(at0, 0);

  for (int32_t leaf : base.leaves()) {
    if (base.node_sign(leaf) != sub.sign()) {
      CHECK_THROWS_AS(graft(base, leaf, sub), ValidationError);
      continue;
    }
    auto [big, where] = graft(base, leaf, sub);
    CHECK_EQ(big.order, base.order + sub.order);
    auto [lower, upper] = split_tree(big, where);
    CHECK_EQ(lower.shape_string(), sub.shape_string());
    CHECK_EQ(upper.shape_string(), base.shape_string());
    CHECK_EQ(lower.sign(), sub.sign());
  }
  CHECK_THROWS_AS(graft(base, 0, sub), ValidationError);  // root is not a leaf
}

TEST_CASE("graft onto the left leaf of the order-1 tree gives the first order-2 shape") {
  auto t1 = enumerate_trees(1, +1)[0];
  int32_t left = t1.nodes[0].child[0];
  auto [t2, where] = graft(t1, left, enumerate_trees(1, +1)[0]);
  (void)where;
  CHECK_EQ(t2.shape_string(), enumerate_trees(2, +1)[0].shape_string());
}

TEST_CASE("polarity") {
  CHECK_EQ(polarity(make_leaf_tree(+1)), cplx(1, 0));
  auto t1p = enumerate_trees(1, +1)[0];
  auto t1m = enumerate_trees(1, -1)[0];
  CHECK_EQ(polarity(t1p), cplx(0, 1));
  CHECK_EQ(polarity(t1m), cplx(0, -1));
}

TEST_CASE("tree serialization round-trip") {
  for (int n = 0; n <= 4; ++n)
    for (int sign : {+1, -1})
      for (auto& t : enumerate_trees(n, sign)) {
        auto s = to_string(t);
        auto back = tree_from_string(s);
        CHECK_EQ(to_string(back), s);
      }
  CHECK_THROWS_AS(tree_from_string("blll ++++"), ValidationError);  // sign rule broken
}

TEST_CASE("enumeration capacity limit") {
  CHECK_THROWS_AS(enumerate_trees(6, +1, 100), CapacityError);
}
