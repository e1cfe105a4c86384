#include "wicklab/serialization.hpp"

#include <sstream>

namespace wicklab {

std::string to_string(const SignedTernaryTree& t) {
  std::string s = t.shape_string();
  s += ' ';
  for (int32_t i = 0; i < t.size(); ++i) s += (t.node_sign(i) > 0 ? '+' : '-');
  return s;
}

SignedTernaryTree tree_from_string(const std::string& str) {
  std::istringstream in(str);
  std::string shape, signs;
  if (!(in >> shape >> signs) || shape.size() != signs.size())
    throw ValidationError("tree parse: expected '<shape> <signs>'");
  SignedTernaryTree t;
  t.nodes.resize(shape.size());
  size_t pos = 0;
  struct Rec {
    const std::string& shape;
    const std::string& signs;
    SignedTernaryTree& t;
    size_t& pos;
    int32_t walk(int32_t parent) {
      if (pos >= shape.size()) throw ValidationError("tree parse: truncated shape");
      int32_t id = static_cast<int32_t>(pos++);
      t.nodes[id].parent = parent;
      t.nodes[id].sign = (signs[id] == '+') ? +1 : -1;
      if (shape[id] == 'b')
        for (int j = 0; j < 3; ++j) t.nodes[id].child[j] = walk(id);
      else if (shape[id] != 'l')
        throw ValidationError("tree parse: shape characters must be 'b' or 'l'");
      return id;
    }
  } rec{shape, signs, t, pos};
  rec.walk(-1);
  if (pos != shape.size()) throw ValidationError("tree parse: trailing shape characters");
  t.order = 0;
  for (int32_t i = 0; i < t.size(); ++i)
    if (!t.is_leaf(i)) ++t.order;
  // enforce the sign rule
  for (int32_t i = 0; i < t.size(); ++i)
    if (!t.is_leaf(i))
      for (int j = 0; j < 3; ++j) {
        int expect = (j == 1) ? -t.node_sign(i) : t.node_sign(i);
        if (t.node_sign(t.nodes[i].child[j]) != expect)
          throw ValidationError("tree parse: sign rule violated");
      }
  return t;
}

std::string to_string(const Couple& c) {
  std::string s = to_string(c.plus_tree);
  s += " | ";
  s += to_string(c.minus_tree);
  s += " |";
  auto minus_leaves = c.minus_tree.leaves();
  std::vector<int32_t> pos_of(c.minus_tree.size(), -1);
  for (size_t i = 0; i < minus_leaves.size(); ++i) pos_of[minus_leaves[i]] = int32_t(i);
  for (auto& [lp, lm] : c.pairing) {
    (void)lp;  // pairing is sorted by plus leaf, which matches pre-order
    s += ' ';
    s += std::to_string(pos_of[lm]);
  }
  return s;
}

Couple couple_from_string(const std::string& str) {
  auto bar1 = str.find('|');
  auto bar2 = str.find('|', bar1 == std::string::npos ? 0 : bar1 + 1);
  if (bar1 == std::string::npos || bar2 == std::string::npos)
    throw ValidationError("couple parse: expected '<tree> | <tree> | <perm>'");
  SignedTernaryTree plus = tree_from_string(str.substr(0, bar1));
  SignedTernaryTree minus = tree_from_string(str.substr(bar1 + 1, bar2 - bar1 - 1));
  std::istringstream in(str.substr(bar2 + 1));
  auto plus_leaves = plus.leaves();
  auto minus_leaves = minus.leaves();
  std::vector<std::pair<int32_t, int32_t>> pairing;
  int idx;
  size_t i = 0;
  while (in >> idx) {
    if (i >= plus_leaves.size() || idx < 0 || size_t(idx) >= minus_leaves.size())
      throw ValidationError("couple parse: permutation out of range");
    pairing.emplace_back(plus_leaves[i++], minus_leaves[idx]);
  }
  if (i != plus_leaves.size()) throw ValidationError("couple parse: permutation too short");
  return make_couple(plus, minus, pairing);
}

}  // namespace wicklab
