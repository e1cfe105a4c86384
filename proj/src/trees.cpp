#include "wicklab/trees.hpp"

#include <algorithm>

namespace wicklab {

std::vector<int32_t> SignedTernaryTree::leaves() const {
  std::vector<int32_t> out;
  for (int32_t i = 0; i < size(); ++i)
    if (is_leaf(i)) out.push_back(i);
  return out;
}

std::vector<int32_t> SignedTernaryTree::branching_nodes() const {
  std::vector<int32_t> out;
  for (int32_t i = 0; i < size(); ++i)
    if (!is_leaf(i)) out.push_back(i);
  return out;
}

bool SignedTernaryTree::is_ancestor_or_self(int32_t a, int32_t b) const {
  // pre-order ids: the subtree of a occupies a contiguous id range, but we
  // walk parents instead to stay independent of that detail
  while (b >= 0) {
    if (b == a) return true;
    b = nodes[b].parent;
  }
  return false;
}

std::string SignedTernaryTree::shape_string() const {
  std::string s(nodes.size(), 'l');
  for (int32_t i = 0; i < size(); ++i)
    if (!is_leaf(i)) s[i] = 'b';
  return s;
}

SignedTernaryTree make_leaf_tree(int sign) {
  SignedTernaryTree t;
  t.nodes.resize(1);
  t.nodes[0].sign = static_cast<int8_t>(sign);
  t.order = 0;
  return t;
}

namespace {

// Copy src's subtree rooted at src_node into dst in pre-order, attaching it
// below dst_parent; signs are recomputed from root_sign downward.
int32_t copy_subtree(SignedTernaryTree& dst, int32_t dst_parent, int sign,
                     const SignedTernaryTree& src, int32_t src_node) {
  int32_t id = static_cast<int32_t>(dst.nodes.size());
  dst.nodes.emplace_back();
  dst.nodes[id].parent = dst_parent;
  dst.nodes[id].sign = static_cast<int8_t>(sign);
  if (!src.is_leaf(src_node)) {
    for (int j = 0; j < 3; ++j) {
      int child_sign = (j == 1) ? -sign : sign;
      int32_t c = copy_subtree(dst, id, child_sign, src, src.nodes[src_node].child[j]);
      dst.nodes[id].child[j] = c;
    }
  }
  return id;
}

}  // namespace

SignedTernaryTree tree_product(const SignedTernaryTree& t1, const SignedTernaryTree& t2,
                               const SignedTernaryTree& t3) {
  int s = t1.sign();
  if (t2.sign() != -s || t3.sign() != s)
    throw ValidationError("tree_product: child signs must follow (s,-s,s)");
  SignedTernaryTree out;
  out.nodes.reserve(size_t(t1.size()) + t2.size() + t3.size() + 1);
  out.nodes.emplace_back();
  out.nodes[0].sign = static_cast<int8_t>(s);
  out.nodes[0].child[0] = copy_subtree(out, 0, s, t1, 0);
  out.nodes[0].child[1] = copy_subtree(out, 0, -s, t2, 0);
  out.nodes[0].child[2] = copy_subtree(out, 0, s, t3, 0);
  out.order = t1.order + t2.order + t3.order + 1;
  return out;
}

std::pair<SignedTernaryTree, int32_t> graft(const SignedTernaryTree& base, int32_t leaf,
                                            const SignedTernaryTree& sub) {
  if (leaf < 0 || leaf >= base.size() || !base.is_leaf(leaf))
    throw ValidationError("graft: target node is not a leaf");
  if (base.node_sign(leaf) != sub.sign())
    throw ValidationError("graft: leaf sign does not match subtree root sign");
  SignedTernaryTree out;
  out.nodes.reserve(size_t(base.size()) + sub.size() - 1);

  int32_t graft_id = -1;
  // rebuild base in pre-order, expanding `leaf` into sub
  struct Rec {
    const SignedTernaryTree& base;
    const SignedTernaryTree& sub;
    SignedTernaryTree& out;
    int32_t leaf;
    int32_t& graft_id;
    int32_t walk(int32_t b, int32_t parent) {
      if (b == leaf) {
        int32_t id = copy_subtree(out, parent, base.node_sign(leaf), sub, 0);
        graft_id = id;
        return id;
      }
      int32_t id = static_cast<int32_t>(out.nodes.size());
      out.nodes.emplace_back();
      out.nodes[id].parent = parent;
      out.nodes[id].sign = base.nodes[b].sign;
      if (!base.is_leaf(b))
        for (int j = 0; j < 3; ++j) out.nodes[id].child[j] = walk(base.nodes[b].child[j], id);
      return id;
    }
  } rec{base, sub, out, leaf, graft_id};
  rec.walk(0, -1);
  out.order = base.order + sub.order;
  return {out, graft_id};
}

std::pair<SignedTernaryTree, SignedTernaryTree> split_tree(const SignedTernaryTree& t,
                                                           int32_t node) {
  if (node < 0 || node >= t.size()) throw ValidationError("split_tree: bad node id");
  SignedTernaryTree lower;
  copy_subtree(lower, -1, t.node_sign(node), t, node);
  lower.order = 0;
  for (int32_t i = 0; i < lower.size(); ++i)
    if (!lower.is_leaf(i)) ++lower.order;

  SignedTernaryTree upper;
  struct Rec {
    const SignedTernaryTree& t;
    SignedTernaryTree& out;
    int32_t cut;
    int32_t walk(int32_t b, int32_t parent) {
      int32_t id = static_cast<int32_t>(out.nodes.size());
      out.nodes.emplace_back();
      out.nodes[id].parent = parent;
      out.nodes[id].sign = t.nodes[b].sign;
      if (b != cut && !t.is_leaf(b))
        for (int j = 0; j < 3; ++j) out.nodes[id].child[j] = walk(t.nodes[b].child[j], id);
      return id;
    }
  } rec{t, upper, node};
  rec.walk(0, -1);
  upper.order = t.order - lower.order;
  return {lower, upper};
}

cplx polarity(const SignedTernaryTree& t) {
  cplx p(1, 0);
  for (int32_t i = 0; i < t.size(); ++i)
    if (!t.is_leaf(i)) p *= cplx(0, t.node_sign(i));
  return p;
}

uint64_t ternary_tree_count(int n) {
  // C(3n,n)/(2n+1), exact in integers for n <= 20
  if (n == 0) return 1;
  // C(3n,n) = prod_{i=1..n} (2n+i)/i, integral at every partial product
  unsigned __int128 num = 1;
  for (int i = 1; i <= n; ++i) {
    num = num * static_cast<unsigned>(2 * n + i);
    num /= static_cast<unsigned>(i);
  }
  return static_cast<uint64_t>(num / static_cast<unsigned>(2 * n + 1));
}

std::vector<SignedTernaryTree> enumerate_trees(int n, int sign, uint64_t limit) {
  if (n < 0) throw ValidationError("enumerate_trees: order must be >= 0");
  uint64_t count = ternary_tree_count(n);
  if (count > limit) throw CapacityError("enumerate_trees: count exceeds enumeration limit");
  // memoized by order; signs are recomputed on the final copies
  std::vector<std::vector<SignedTernaryTree>> memo(size_t(n) + 1);
  memo[0] = {make_leaf_tree(+1)};
  auto negate = [](SignedTernaryTree t) {
    for (auto& nd : t.nodes) nd.sign = -nd.sign;
    return t;
  };
  for (int m = 1; m <= n; ++m) {
    std::vector<SignedTernaryTree> acc;
    for (int n1 = 0; n1 <= m - 1; ++n1)
      for (int n2 = 0; n2 + n1 <= m - 1; ++n2) {
        int n3 = m - 1 - n1 - n2;
        for (const auto& a : memo[n1])
          for (const auto& b : memo[n2])
            for (const auto& c : memo[n3]) acc.push_back(tree_product(a, negate(b), c));
      }
    std::sort(acc.begin(), acc.end(),
              [](const SignedTernaryTree& x, const SignedTernaryTree& y) {
                return x.shape_string() < y.shape_string();
              });
    memo[m] = std::move(acc);
  }
  std::vector<SignedTernaryTree> out = memo[n];
  if (sign < 0)
    for (auto& t : out)
      for (auto& nd : t.nodes) nd.sign = -nd.sign;
  return out;
}

}  // namespace wicklab
