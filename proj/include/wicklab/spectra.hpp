#ifndef WICKLAB_SPECTRA_HPP
#define WICKLAB_SPECTRA_HPP

#include "wicklab/decorations.hpp"
#include "wicklab/profile.hpp"
#include "wicklab/quadrature.hpp"
#include "wicklab/timeorder.hpp"

namespace wicklab {

// product over leaf pairs of |psi(pair value)|^2
double leaf_weight(const Couple& c, const Decoration& dec, const InitialProfile& profile);

// Finite-lattice diagrammatic spectrum of one couple at kinetic scaling
// lambda^2 = L^{-alpha}:
//   polarity * (lambda/L^d)^{2n} * sum over lattice decorations of
//   Theta_t(resonances) * prod |psi|^2,
// the time kernel evaluated exactly per integer resonance vector.  Restricted
// to couples of order <= 2 (the per-tree kernel tables are dense); the lattice
// is truncated at profile.spectral_radius unless `radius` overrides it.
cplx finite_L_spectrum(const Couple& c, double t, const VecZ& k, double L, double alpha,
                       const InitialProfile& profile, double radius = 0,
                       uint64_t cap = 4'000'000'000ull);

// Brute-force oracle over explicitly enumerated decorations (tests, small L).
cplx finite_L_spectrum_direct(const Couple& c, double t, const VecZ& k, double L, double alpha,
                              const InitialProfile& profile, double radius = 0);

// Kinetic-limit spectrum of a regular couple:
//   Theta_t[factor tree](0) * iterated resonant integral of the leaf weights,
// evaluated through the factor recursion (nested quadrature).
double kinetic_limit_spectrum(const Couple& c, double t, const VecR& k,
                              const InitialProfile& profile, const ResonantRule& rule);

// Inhomogeneous variants.  transport_on toggles the alpha=beta wavepacket
// shift x -> x + s(k-k_j).
double kinetic_limit_marginal_inhom(const Couple& c, double t, const VecR& k, const VecR& x,
                                    const InitialProfile& profile, const ResonantRule& rule,
                                    bool transport_on, int time_order = 12);

double kinetic_limit_spectrum_inhom(const Couple& c, double t, const VecR& k, const VecR& x,
                                    const VecR& zeta, const InitialProfile& profile,
                                    const ResonantRule& rule, bool transport_on,
                                    int time_order = 12);

// linear-extension weight of the factor tree: Theta_t[I_q](0) = t^n e(I_q)/n!
double factor_tree_volume(const Couple& c, double t);

}  // namespace wicklab

#endif  // WICKLAB_SPECTRA_HPP
