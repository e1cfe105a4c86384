#include "wicklab/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wicklab {

cplx gauss_sum(double s, double r, int64_t h, int64_t N) {
  if (N < 0) throw ValidationError("gauss_sum: N must be >= 0");
  // incremental quadratic rotators: phase(n+1) - phase(n) = pi (s (2n+1) + r)
  cplx acc(0, 0);
  cplx cur = std::polar(1.0, kPi * (s * double(h) * double(h) + r * double(h)));
  cplx step = std::polar(1.0, kPi * (s * double(2 * h + 1) + r));
  cplx step2 = std::polar(1.0, 2.0 * kPi * s);
  for (int64_t n = 0; n <= N; ++n) {
    acc += cur;
    cur *= step;
    step *= step2;
  }
  return acc;
}

double gauss_sum_moment(int p, int64_t N, double r, int64_t h, int resolution) {
  if (p != 4 && p != 6) throw ValidationError("gauss_sum_moment: p must be 4 or 6");
  int64_t ns = std::max<int64_t>(8, resolution * N * N);
  double acc = 0;
  for (int64_t i = 0; i < ns; ++i) {  // periodic integrand: Riemann sum = trapezoid
    double s = 2.0 * double(i) / double(ns);
    double g = std::abs(gauss_sum(s, r, h, N));
    double gp = g * g * g * g;
    if (p == 6) gp *= g * g;
    acc += gp;
  }
  return acc / double(ns);
}

double Profile1D::eval(double u) const {
  double x = (u - center) / width;
  switch (kind) {
    case Gaussian:
      return std::exp(-kPi * x * x);
    case BSpline3: {
      double a = std::abs(x);
      if (a >= 2) return 0;
      if (a <= 1) return (4 - 6 * a * a + 3 * a * a * a) / 6.0;
      double t = 2 - a;
      return t * t * t / 6.0;
    }
  }
  return 0;
}

cplx Profile1D::fourier(double v) const {
  // int exp(2 pi i u v) f((u-c)/w) du = w exp(2 pi i c v) fhat(w v)
  cplx phase = std::polar(1.0, kTwoPi * center * v);
  double wv = width * v;
  switch (kind) {
    case Gaussian:
      return width * phase * std::exp(-kPi * wv * wv);
    case BSpline3: {
      double x = kPi * wv;
      double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      double s2 = sinc * sinc;
      return width * phase * s2 * s2;
    }
  }
  return 0;
}

double Profile1D::support_halfwidth(double tail) const {
  if (kind == BSpline3) return 2.0 * width;
  return width * std::sqrt(-std::log(tail) / kPi);
}

void SeparableTestFunction::validate() const {
  if (n_slots < 1) throw ValidationError("test function: need at least one slot");
  if (d < 1 || d > kMaxDim) throw ValidationError("test function: bad dimension");
  if (static_cast<int>(temporal.size()) != n_slots ||
      static_cast<int>(spatial.size()) != n_slots)
    throw ValidationError("test function: per-slot profile lists mismatch");
  for (auto& s : spatial)
    if (static_cast<int>(s[0].size()) != d || static_cast<int>(s[1].size()) != d)
      throw ValidationError("test function: spatial profile lists must have d entries");
}

SeparableTestFunction gaussian_test_function(int n_slots, int d) {
  SeparableTestFunction f;
  f.n_slots = n_slots;
  f.d = d;
  f.temporal.assign(n_slots, Profile1D{});
  f.spatial.assign(n_slots, {std::vector<Profile1D>(d), std::vector<Profile1D>(d)});
  return f;
}

SeparableTestFunction scale_theta(const SeparableTestFunction& phi, double L, double alpha) {
  if (L < 1) throw ValidationError("scale_theta: L must be >= 1");
  if (alpha <= 0 || alpha >= 2) throw ValidationError("scale_theta: alpha must lie in (0,2)");
  SeparableTestFunction out = phi;
  double gamma = std::pow(L, alpha);
  for (auto& t : out.temporal) {
    t.width *= gamma;  // theta_L Phi(s,.) = Phi(s/gamma,.)
    t.center *= gamma;
  }
  return out;
}

SeparableTestFunction scale_theta_infinity(const SeparableTestFunction& phi) {
  SeparableTestFunction out = phi;
  out.temporal_at_zero = true;
  return out;
}

namespace {

// weighted histogram over integer products m = a*b of one coordinate axis
struct Hist {
  int64_t lo = 0;  // product value of index 0
  std::vector<double> w;

  void trim(double rel = 1e-18) {
    double mx = 0;
    for (double x : w) mx = std::max(mx, std::abs(x));
    size_t a = 0, b = w.size();
    while (a < b && std::abs(w[a]) < rel * mx) ++a;
    while (b > a && std::abs(w[b - 1]) < rel * mx) --b;
    lo += int64_t(a);
    w = std::vector<double>(w.begin() + a, w.begin() + b);
  }
};

Hist axis_histogram(const Profile1D& fx, const Profile1D& fy, double L) {
  auto axis_range = [&](const Profile1D& f) {
    double h = f.support_halfwidth();
    int64_t lo = int64_t(std::ceil((f.center - h) * L));
    int64_t hi = int64_t(std::floor((f.center + h) * L));
    return std::pair<int64_t, int64_t>(lo, hi);
  };
  auto [xlo, xhi] = axis_range(fx);
  auto [ylo, yhi] = axis_range(fy);
  int64_t mlo = std::min({xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi});
  int64_t mhi = std::max({xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi});
  Hist h;
  h.lo = mlo;
  h.w.assign(size_t(mhi - mlo + 1), 0.0);
  std::vector<double> wy(size_t(yhi - ylo + 1));
  for (int64_t b = ylo; b <= yhi; ++b) wy[size_t(b - ylo)] = fy.eval(double(b) / L);
  for (int64_t a = xlo; a <= xhi; ++a) {
    double wa = fx.eval(double(a) / L);
    if (wa == 0) continue;
    for (int64_t b = ylo; b <= yhi; ++b) {
      double wb = wy[size_t(b - ylo)];
      if (wb == 0) continue;
      h.w[size_t(a * b - mlo)] += wa * wb;
    }
  }
  h.trim();
  return h;
}

Hist convolve(const Hist& a, const Hist& b) {
  Hist out;
  out.lo = a.lo + b.lo;
  out.w.assign(a.w.size() + b.w.size() - 1, 0.0);
  for (size_t i = 0; i < a.w.size(); ++i) {
    double ai = a.w[i];
    if (ai == 0) continue;
    for (size_t j = 0; j < b.w.size(); ++j) out.w[i + j] += ai * b.w[j];
  }
  out.trim();
  return out;
}

}  // namespace

cplx osc_functional(const SeparableTestFunction& phi, double L) {
  phi.validate();
  if (L <= 0) throw ValidationError("osc_functional: L must be positive");
  if (phi.temporal_at_zero)
    throw ValidationError("osc_functional: finite-L sum needs a temporal profile");
  cplx total(1, 0);
  for (int slot = 0; slot < phi.n_slots; ++slot) {
    Hist acc;
    bool first = true;
    for (int axis = 0; axis < phi.d; ++axis) {
      Hist h = axis_histogram(phi.spatial[slot][0][axis], phi.spatial[slot][1][axis], L);
      acc = first ? h : convolve(acc, h);
      first = false;
    }
    // temporal integral in closed form per product value v = m / L^2
    cplx s(0, 0);
    const Profile1D& g = phi.temporal[slot];
    for (size_t i = 0; i < acc.w.size(); ++i) {
      if (acc.w[i] == 0) continue;
      double v = double(acc.lo + int64_t(i)) / (L * L);
      s += acc.w[i] * g.fourier(v);
    }
    double scale = std::pow(L, -2.0 * phi.d);
    total *= scale * s;
  }
  return total;
}

namespace {

void gauss_legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
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
    x[i] = t;
    w[i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

// int int exp(2 pi i s x y) fx(x) fy(y) dx dy
cplx axis_block_infinity(const Profile1D& fx, const Profile1D& fy, double s) {
  if (fx.kind == Profile1D::Gaussian && fy.kind == Profile1D::Gaussian) {
    // closed form for shifted Gaussians
    double u = fx.width, v = fy.width, a = fx.center, b = fy.center;
    double suv = s * u * v;
    double A = 1.0 + suv * suv;
    cplx B(s * a * v, s * s * u * u * b * v);
    cplx val = std::polar(1.0, kTwoPi * s * a * b);
    val *= std::exp(-kPi * s * s * u * u * b * b);
    val *= std::exp(-kPi * B * B / A) / std::sqrt(A);
    return u * v * val;
  }
  // numeric fallback: tensor Gauss-Legendre over the supports
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre_nodes(48, gx, gw);
  double hx = fx.support_halfwidth(), hy = fy.support_halfwidth();
  cplx acc(0, 0);
  for (size_t i = 0; i < gx.size(); ++i) {
    double x = fx.center + hx * gx[i];
    double wx = fx.eval(x) * gw[i] * hx;
    if (wx == 0) continue;
    for (size_t j = 0; j < gx.size(); ++j) {
      double y = fy.center + hy * gx[j];
      acc += wx * fy.eval(y) * gw[j] * hy * std::polar(1.0, kTwoPi * s * x * y);
    }
  }
  return acc;
}

cplx adaptive_simpson_c(const std::function<cplx(double)>& f, double a, double b, double tol,
                        int depth, cplx fa, cplx fm, cplx fb, cplx whole) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  cplx flm = f(lm), frm = f(rm);
  cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_c(f, a, m, tol / 2, depth - 1, fa, flm, fm, left) +
         adaptive_simpson_c(f, m, b, tol / 2, depth - 1, fm, frm, fb, right);
}

cplx integrate_adaptive_c(const std::function<cplx(double)>& f, double a, double b, double tol,
                          int max_depth = 40) {
  cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_c(f, a, b, tol, max_depth, fa, fm, fb, whole);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  auto g = [&f](double x) { return cplx(f(x), 0.0); };
  return integrate_adaptive_c(g, a, b, tol, max_depth).real();
}

cplx osc_functional_infinity(const SeparableTestFunction& phi, double tol) {
  phi.validate();
  cplx total(1, 0);
  for (int slot = 0; slot < phi.n_slots; ++slot) {
    const auto& sx = phi.spatial[slot][0];
    const auto& sy = phi.spatial[slot][1];
    auto spatial_factor = [&](double s) {
      cplx prod(1, 0);
      for (int axis = 0; axis < phi.d; ++axis) prod *= axis_block_infinity(sx[axis], sy[axis], s);
      return prod;
    };
    cplx slot_val;
    if (phi.temporal_at_zero) {
      double g0 = phi.temporal[slot].eval(0.0);
      // substitute s = tan(theta); the integrand decays like |s|^-d
      auto f = [&](double th) {
        double c = std::cos(th);
        if (std::abs(c) < 1e-14) return cplx(0, 0);
        double s = std::tan(th);
        return spatial_factor(s) / (c * c);
      };
      slot_val = g0 * integrate_adaptive_c(f, -kPi / 2 + 1e-12, kPi / 2 - 1e-12, tol);
    } else {
      const Profile1D& g = phi.temporal[slot];
      double hw = g.support_halfwidth(1e-16);
      auto f = [&](double s) { return g.eval(s) * spatial_factor(s); };
      slot_val = integrate_adaptive_c(f, g.center - hw, g.center + hw, tol);
    }
    total *= slot_val;
  }
  return total;
}

}  // namespace wicklab
