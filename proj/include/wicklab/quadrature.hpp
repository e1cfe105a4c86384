#ifndef WICKLAB_QUADRATURE_HPP
#define WICKLAB_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

#include "wicklab/common.hpp"

namespace wicklab {

// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

// Deterministic product rule for the resonant-manifold integral at d=3:
//   int da int_{b in a-perp} db (1/|a|) G(a,b)
//     = int_0^rmax r dr int_{S^2} dtheta int_{a-perp} G(r theta, b) db,
// the |a|^{d-1} spherical factor absorbing the 1/|a| singularity.  This is
// the delta-factorized form of int delta(Omega) F with a = k1-k, b = k3-k.
struct ResonantQuadrature {
  int n_radial = 16;
  int n_costheta = 10;
  int n_phi = 16;
  int n_b_radial = 12;
  int n_b_angle = 12;
  double r_max = 4.0;
  double b_max = 4.0;

  void validate() const;
};

struct ResonantRule {
  // per node: offsets a, b (b orthogonal to a) and the combined weight
  std::vector<VecR> a, b;
  std::vector<double> w;
  size_t size() const { return w.size(); }
};

ResonantRule build_resonant_rule(const ResonantQuadrature& q);

// int delta((k-k1).(k-k3)) F(k1,k2,k3) with k2 = k1+k3-k, via the rule
double resonant_integral(const ResonantRule& rule, const VecR& k,
                         const std::function<double(const VecR&, const VecR&, const VecR&)>& f);

// Monte Carlo estimate of the same integral (importance-sampled Gaussians),
// with its standard error.
struct McEstimate {
  double value = 0;
  double std_error = 0;
  uint64_t samples = 0;
};
McEstimate resonant_integral_mc(const VecR& k,
                                const std::function<double(const VecR&, const VecR&, const VecR&)>& f,
                                uint64_t n_samples, uint64_t seed, double sigma = 1.5);

}  // namespace wicklab

#endif  // WICKLAB_QUADRATURE_HPP
