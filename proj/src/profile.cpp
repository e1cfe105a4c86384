#include "wicklab/profile.hpp"

#include <cmath>

namespace wicklab {

void InitialProfile::validate() const {
  if (amplitude <= 0 || a <= 0 || b <= 0) throw ValidationError("profile: rates must be positive");
  if (d < 1 || d > kMaxDim) throw ValidationError("profile: bad dimension");
  if (k0.d != 0 && k0.d != d) throw ValidationError("profile: k0 dimension mismatch");
  if (spectral_radius <= 0) throw ValidationError("profile: spectral radius must be positive");
}

double InitialProfile::psi(const VecR& k) const {
  VecR dk = k;
  if (k0.d == d) dk -= k0;
  return amplitude * std::exp(-b * norm2(dk));
}

double InitialProfile::psi2(const VecR& k) const {
  double p = psi(k);
  return p * p;
}

double InitialProfile::phi(const VecR& x, const VecR& k) const {
  return psi(k) * std::exp(-a * norm2(x));
}

double InitialProfile::phi2(const VecR& x, const VecR& k) const {
  double p = phi(x, k);
  return p * p;
}

InitialProfile InitialProfile::at_position(const VecR& x) const {
  InitialProfile out = *this;
  out.amplitude = amplitude * std::exp(-a * norm2(x));
  return out;
}

double wigner(const InitialProfile& profile, const VecR& k, const VecR& x, const VecR& zeta) {
  double a = profile.a;
  int d = profile.d;
  double pref = std::pow(2.0 * kPi / a, 0.5 * d);
  return profile.psi2(k) * std::exp(-2.0 * a * norm2(x)) * pref *
         std::exp(-2.0 * kPi * kPi * norm2(zeta) / a);
}

double wigner_quadrature(const InitialProfile& profile, const VecR& k, const VecR& x,
                         const VecR& zeta, int order) {
  // W(x,zeta) = int e^{-2 pi i y.zeta} f(x+y/2) conj(f(x-y/2)) dy with
  // f = phi(.,k); real for f real
  int d = profile.d;
  double hw = 8.0 / std::sqrt(profile.a);
  double h = 2 * hw / order;
  std::function<double(int, VecR&)> rec = [&](int axis, VecR& y) -> double {
    double acc = 0;
    for (int i = 0; i < order; ++i) {
      y.v[axis] = -hw + (i + 0.5) * h;
      if (axis + 1 < d) {
        acc += rec(axis + 1, y);
      } else {
        VecR xp = x, xm = x;
        for (int j = 0; j < d; ++j) {
          xp.v[j] += 0.5 * y.v[j];
          xm.v[j] -= 0.5 * y.v[j];
        }
        acc += profile.phi(xp, k) * profile.phi(xm, k) * std::cos(kTwoPi * dot(y, zeta));
      }
    }
    return acc * h;
  };
  VecR y(d);
  return rec(0, y);
}

}  // namespace wicklab
