#ifndef WICKLAB_SERIALIZATION_HPP
#define WICKLAB_SERIALIZATION_HPP

#include <string>

#include "wicklab/couples.hpp"

namespace wicklab {

// Line format, round-trip exact:
//   tree   := <shape> <signs>            e.g.  "blbllll +-++--+"
//             shape: pre-order, 'b' branching / 'l' leaf; signs per node
//   couple := <tree> | <tree> | <perm>   e.g.  "bllll ... | bllll ... | 2 0 1"
//             perm lists, for the i-th plus-tree leaf in pre-order, the
//             position of its partner among the minus-tree leaves in pre-order
std::string to_string(const SignedTernaryTree& t);
SignedTernaryTree tree_from_string(const std::string& s);

std::string to_string(const Couple& c);
Couple couple_from_string(const std::string& s);

}  // namespace wicklab

#endif  // WICKLAB_SERIALIZATION_HPP
