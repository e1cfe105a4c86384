#include "wicklab/quadrature.hpp"

#include <cmath>

namespace wicklab {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 1, p1 = t, dp = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1;
      p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 - t);  // descending t -> ascending x
    w[i] = 1.0 / ((1 - t * t) * dp * dp);
  }
}

void ResonantQuadrature::validate() const {
  if (n_radial < 2 || n_costheta < 2 || n_phi < 2 || n_b_radial < 2 || n_b_angle < 2)
    throw ValidationError("resonant quadrature: node counts too small");
  if (r_max <= 0 || b_max <= 0) throw ValidationError("resonant quadrature: bad support radii");
}

ResonantRule build_resonant_rule(const ResonantQuadrature& q) {
  q.validate();
  std::vector<double> xr, wr, xc, wc, xb, wb;
  gauss_legendre_01(q.n_radial, xr, wr);
  gauss_legendre_01(q.n_costheta, xc, wc);
  gauss_legendre_01(q.n_b_radial, xb, wb);
  ResonantRule rule;
  for (int ir = 0; ir < q.n_radial; ++ir) {
    double r = q.r_max * xr[ir];
    double w_r = q.r_max * wr[ir] * r;  // measure r dr at d=3
    for (int ic = 0; ic < q.n_costheta; ++ic) {
      double ct = 2.0 * xc[ic] - 1.0;
      double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      double w_c = 2.0 * wc[ic];
      for (int ip = 0; ip < q.n_phi; ++ip) {
        double phi = kTwoPi * (ip + 0.5) / q.n_phi;
        double w_p = kTwoPi / q.n_phi;
        VecR theta{st * std::cos(phi), st * std::sin(phi), ct};
        // orthonormal basis of theta-perp
        VecR e1 = (std::abs(ct) < 0.9) ? VecR{0, 0, 1} : VecR{1, 0, 0};
        // e1 <- normalize(e1 - (e1.theta) theta)
        double pr = dot(e1, theta);
        VecR u1 = e1 - pr * theta;
        double n1 = std::sqrt(norm2(u1));
        for (int i = 0; i < 3; ++i) u1.v[i] /= n1;
        VecR u2{theta.v[1] * u1.v[2] - theta.v[2] * u1.v[1],
                theta.v[2] * u1.v[0] - theta.v[0] * u1.v[2],
                theta.v[0] * u1.v[1] - theta.v[1] * u1.v[0]};
        for (int ib = 0; ib < q.n_b_radial; ++ib) {
          double rb = q.b_max * xb[ib];
          double w_rb = q.b_max * wb[ib] * rb;  // polar measure in the plane
          for (int ia = 0; ia < q.n_b_angle; ++ia) {
            double ang = kTwoPi * (ia + 0.5) / q.n_b_angle;
            double w_a = kTwoPi / q.n_b_angle;
            VecR a = r * theta;
            VecR b = (rb * std::cos(ang)) * u1 + (rb * std::sin(ang)) * u2;
            rule.a.push_back(a);
            rule.b.push_back(b);
            rule.w.push_back(w_r * w_c * w_p * w_rb * w_a);
          }
        }
      }
    }
  }
  return rule;
}

double resonant_integral(const ResonantRule& rule, const VecR& k,
                         const std::function<double(const VecR&, const VecR&, const VecR&)>& f) {
  double acc = 0;
  for (size_t i = 0; i < rule.size(); ++i) {
    VecR k1 = k + rule.a[i];
    VecR k3 = k + rule.b[i];
    VecR k2 = k1 + rule.b[i];  // k1 + k3 - k
    acc += rule.w[i] * f(k1, k2, k3);
  }
  return acc;
}

McEstimate resonant_integral_mc(const VecR& k,
                                const std::function<double(const VecR&, const VecR&, const VecR&)>& f,
                                uint64_t n_samples, uint64_t seed, double sigma) {
  Rng rng(seed, 0x7e50);
  double s1 = 0, s2 = 0;
  const double norm_a = std::pow(kTwoPi * sigma * sigma, 1.5);  // (2 pi s^2)^{3/2}
  const double norm_b = kTwoPi * sigma * sigma;                 // 2-D Gaussian in the plane
  for (uint64_t i = 0; i < n_samples; ++i) {
    VecR a{sigma * rng.next_normal(), sigma * rng.next_normal(), sigma * rng.next_normal()};
    double ra = std::sqrt(norm2(a));
    if (ra < 1e-12) {
      continue;  // measure-zero direction degenerate
    }
    VecR theta = (1.0 / ra) * a;
    VecR e1 = (std::abs(theta.v[2]) < 0.9) ? VecR{0, 0, 1} : VecR{1, 0, 0};
    double pr = dot(e1, theta);
    VecR u1 = e1 - pr * theta;
    double n1 = std::sqrt(norm2(u1));
    for (int j = 0; j < 3; ++j) u1.v[j] /= n1;
    VecR u2{theta.v[1] * u1.v[2] - theta.v[2] * u1.v[1],
            theta.v[2] * u1.v[0] - theta.v[0] * u1.v[2],
            theta.v[0] * u1.v[1] - theta.v[1] * u1.v[0]};
    double b1 = sigma * rng.next_normal(), b2 = sigma * rng.next_normal();
    VecR b = b1 * u1 + b2 * u2;
    double pa = std::exp(-0.5 * norm2(a) / (sigma * sigma)) / norm_a;
    double pb = std::exp(-0.5 * (b1 * b1 + b2 * b2) / (sigma * sigma)) / norm_b;
    VecR k1 = k + a, k3 = k + b, k2 = k1 + b;
    double val = f(k1, k2, k3) / (ra * pa * pb);
    s1 += val;
    s2 += val * val;
  }
  McEstimate est;
  est.samples = n_samples;
  est.value = s1 / double(n_samples);
  double var = std::max(0.0, s2 / double(n_samples) - est.value * est.value);
  est.std_error = std::sqrt(var / double(n_samples));
  return est;
}

}  // namespace wicklab
