#ifndef WICKLAB_OSCILLATORY_HPP
#define WICKLAB_OSCILLATORY_HPP

#include <array>
#include <vector>

#include "wicklab/common.hpp"

namespace wicklab {

// G_h(s,r,N) = sum_{n=h}^{h+N} exp(i pi (s n^2 + r n))
cplx gauss_sum(double s, double r, int64_t h, int64_t N);

// mean over one period s in [0,2] of |G|^p, trapezoid with resolution*N^2
// intervals (the integrand varies on scale 1/N^2)
double gauss_sum_moment(int p, int64_t N, double r, int64_t h, int resolution = 4);

// 1-D profile with closed-form Fourier transform.
//   Gaussian:  exp(-pi ((u-center)/width)^2)
//   BSpline3:  cubic B-spline((u-center)/width), compact support, C^2
struct Profile1D {
  enum Kind { Gaussian, BSpline3 };
  Kind kind = Gaussian;
  double width = 1.0;
  double center = 0.0;

  double eval(double u) const;
  // int exp(2 pi i u v) profile(u) du  (complex when center != 0)
  cplx fourier(double v) const;
  double support_halfwidth(double tail = 1e-18) const;
};

// Separable test function on R^n x (R^{2d})^n: product of per-slot temporal
// profiles g_j(s_j) and per-axis spatial profiles over each 2d block.
struct SeparableTestFunction {
  int n_slots = 1;
  int d = 3;
  bool temporal_at_zero = false;  // temporal replaced by its value at s = 0
  std::vector<Profile1D> temporal;                            // per slot
  std::vector<std::array<std::vector<Profile1D>, 2>> spatial;  // [slot][x|y][axis]

  void validate() const;
};

// standard Gaussian data: exp(-pi s^2) exp(-pi |z|^2) per slot
SeparableTestFunction gaussian_test_function(int n_slots, int d);

// theta_L: dilate every temporal profile by gamma = L^alpha; theta_infinity
// freezes the temporal at s = 0.
SeparableTestFunction scale_theta(const SeparableTestFunction& phi, double L, double alpha);
SeparableTestFunction scale_theta_infinity(const SeparableTestFunction& phi);

// S_L(Phi): (1/L^{2nd}) sum over z in (Z_L^{2d})^n of the temporal integrals
// against exp(2 pi i s.varpi(z)), varpi_j = x_j.y_j; exact up to the profile
// tails (< 1e-18 of the mass).
cplx osc_functional(const SeparableTestFunction& phi, double L);

// S_infinity(Phi): full integral; per-axis closed-form Gaussian reduction,
// numeric 2-D reduction for spline profiles, then adaptive 1-D quadrature.
cplx osc_functional_infinity(const SeparableTestFunction& phi, double tol = 1e-9);

// adaptive Simpson on [a,b]
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-9, int max_depth = 48);

}  // namespace wicklab

#endif  // WICKLAB_OSCILLATORY_HPP
