#ifndef WICKLAB_PROFILE_HPP
#define WICKLAB_PROFILE_HPP

#include "wicklab/common.hpp"

namespace wicklab {

// Gaussian-envelope initial data phi(x,k) = A exp(-a|x|^2) exp(-b|k-k0|^2).
// psi(k) = phi(0,k) is the homogeneous trace.  spectral_radius records where
// |psi|^2 is treated as numerically supported (lattice truncations use it).
struct InitialProfile {
  double amplitude = 1.0;
  double a = kPi;  // x-envelope rate
  double b = 1.0;  // k-envelope rate
  VecR k0;
  int d = 3;
  double spectral_radius = 2.5;

  void validate() const;
  double psi(const VecR& k) const;   // phi(0,k)
  double psi2(const VecR& k) const;  // |psi|^2
  double phi(const VecR& x, const VecR& k) const;
  double phi2(const VecR& x, const VecR& k) const;
  // profile in k at frozen position x (Gaussian family is closed under this)
  InitialProfile at_position(const VecR& x) const;
};

// Wigner transform of phi(.,k) at (x,zeta); closed form for the Gaussian
// family:  W(x,zeta) = psi(k)^2 e^{-2a|x|^2} (2 pi/a)^{d/2} e^{-2 pi^2 |zeta|^2 / a}.
double wigner(const InitialProfile& profile, const VecR& k, const VecR& x, const VecR& zeta);

// quadrature oracle for the same quantity (tests); direct y-integration
double wigner_quadrature(const InitialProfile& profile, const VecR& k, const VecR& x,
                         const VecR& zeta, int order = 64);

}  // namespace wicklab

#endif  // WICKLAB_PROFILE_HPP
