#ifndef WICKLAB_DECORATIONS_HPP
#define WICKLAB_DECORATIONS_HPP

#include <functional>
#include <vector>

#include "wicklab/couples.hpp"

namespace wicklab {

enum class DecoKind { D, C };

// Truncated lattice Z^d_L = (1/L) Z^d, modes |k| <= radius.
struct LatticeSpec {
  double L = 1.0;
  int d = 3;
  double radius = 1.0;

  void validate() const {
    if (L <= 0) throw ValidationError("LatticeSpec: L must be positive");
    if (d < 1 || d > kMaxDim) throw ValidationError("LatticeSpec: bad dimension");
    if (radius <= 0) throw ValidationError("LatticeSpec: radius must be positive");
  }
  // squared integer-norm bound for lattice coordinates m = L*k
  int64_t r2max() const {
    double rl = radius * L;
    return static_cast<int64_t>(rl * rl * (1 + 1e-12));
  }
};

// Assignment of d-vectors to every node of a couple.  D-kind satisfies
// s(b) v_b = sum_children s(n) v_n, C-kind v_b = sum v_n; paired leaves carry
// equal values.
struct Decoration {
  DecoKind kind = DecoKind::D;
  std::vector<VecR> plus_vals, minus_vals;

  const VecR& at(NodeRef n) const { return n.tree == 0 ? plus_vals[n.id] : minus_vals[n.id]; }
};

// Omega(k1,k2,k3) = (|k1-k2+k3|^2 - |k1|^2 + |k2|^2 - |k3|^2)/2
//                 = (k-k1).(k-k3) with k = k1-k2+k3.
double resonance_factor(const VecR& k1, const VecR& k2, const VecR& k3);
int64_t resonance_factor(const VecZ& k1, const VecZ& k2, const VecZ& k3);

// Unique decoration of a single tree extending the given leaf values.
std::vector<VecR> extend_leaf_values_tree(const SignedTernaryTree& t,
                                          const std::vector<VecR>& leaf_vals, DecoKind kind);

// Unique decoration of a couple extending per-pair values (pairs indexed as in
// Couple::pairing).
Decoration extend_pair_values(const Couple& c, const std::vector<VecR>& pair_vals, DecoKind kind);

// Same, but from explicit per-leaf values; throws if paired leaves disagree.
Decoration extend_leaf_values(const Couple& c, const std::vector<VecR>& plus_leaf_vals,
                              const std::vector<VecR>& minus_leaf_vals, DecoKind kind);

// Branching nodes of a couple in canonical order (plus tree pre-order, then
// minus tree pre-order).
std::vector<NodeRef> branching_refs(const Couple& c);

// Resonance value at one branching node: s(b) * Omega(children values).
double resonance_at(const Couple& c, const Decoration& dec, NodeRef b);
// All branching nodes, in branching_refs order.
std::vector<double> resonance_vector(const Couple& c, const Decoration& dec);

// Factor coordinates of a regular couple.  Every irreducible factor of a
// regular couple has exactly one branching node in each tree; the coordinate
// of a factor is z = (x,y) at its plus-tree branching node, where
// s(b) x = v_b - v_b[1], s(b) y = v_b - v_b[3].  The pair (x,y) satisfies
// x.y = Omega at the factor's positive branching node.
struct RegularFactorBasis {
  // per factor: plus-tree node, minus-tree node, in increasing plus-node order
  std::vector<std::pair<int32_t, int32_t>> factor_nodes;
  int count() const { return static_cast<int>(factor_nodes.size()); }
};
RegularFactorBasis regular_factor_basis(const Couple& c);

std::vector<std::pair<VecR, VecR>> coords_from_decoration(const Couple& c,
                                                          const RegularFactorBasis& basis,
                                                          const Decoration& dec);
Decoration change_of_variables(const Couple& c, const RegularFactorBasis& basis, const VecR& root,
                               const std::vector<std::pair<VecR, VecR>>& coords);

// Gamma matrix of a node (pairing x pairing, entries in {-1,0,1}).
std::vector<std::vector<int>> gamma_matrix(const Couple& c, NodeRef n);

// --- lattice enumeration ---------------------------------------------------

struct LatticeDecoration {
  std::vector<VecZ> plus_vals, minus_vals;
  const VecZ& at(NodeRef n) const { return n.tree == 0 ? plus_vals[n.id] : minus_vals[n.id]; }
};

// Streams every D-decoration with lattice values of norm <= spec.radius and
// root value k (integer coordinates m = L*k).  Return false to stop.
void enumerate_lattice_decorations(const Couple& c, const VecZ& k, const LatticeSpec& spec,
                                   const std::function<bool(const LatticeDecoration&)>& visit);

uint64_t count_lattice_decorations(const Couple& c, const VecZ& k, const LatticeSpec& spec,
                                   uint64_t cap = UINT64_MAX);

// Number of decorations in the ball whose scaled resonance gamma*Omega_b lies
// in [q_lo, q_hi] at every branching node; exhaustive scan with pruning.
uint64_t count_quasi_resonant(const Couple& c, const VecZ& k, const LatticeSpec& spec, double q_lo,
                              double q_hi, double gamma, uint64_t cap = UINT64_MAX);

// --- exact integer linear algebra (for the algebraic criteria) --------------

// Determinant by fraction-free (Bareiss) elimination; throws on overflow risk.
__int128 det_bareiss(std::vector<std::vector<int64_t>> m);
int rank_exact(std::vector<std::vector<int64_t>> m);
// Basis of the rational nullspace, returned as integer vectors.
std::vector<std::vector<int64_t>> nullspace_exact(const std::vector<std::vector<int64_t>>& m);

}  // namespace wicklab

#endif  // WICKLAB_DECORATIONS_HPP
