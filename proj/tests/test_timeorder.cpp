#include "doctest.h"
#include "wicklab/timeorder.hpp"

#include <cmath>

using namespace wicklab;

namespace {

// independent oracle: evaluate the nested simplex integral by recursive
// Gauss-Legendre quadrature (no closed-form algebra involved)
struct GL {
  std::vector<double> x, w;  // nodes/weights on [0,1]
  explicit GL(int n) {
    // Newton on Legendre polynomials
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = t;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      x[i] = 0.5 * (1 - t);
      double p0 = 1, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1);
      w[i] = 1.0 / ((1 - t * t) * dp * dp);
    }
  }
};

cplx theta_quadrature_subtree(const std::vector<std::vector<int32_t>>& ch,
                              const std::vector<double>& omega, int32_t node, double t,
                              const GL& gl) {
  cplx acc(0, 0);
  for (size_t i = 0; i < gl.x.size(); ++i) {
    double s = t * gl.x[i];
    cplx prod = std::polar(1.0, kTwoPi * s * omega[node]);
    for (int32_t c : ch[node]) prod *= theta_quadrature_subtree(ch, omega, c, s, gl);
    acc += gl.w[i] * prod;
  }
  return t * acc;
}

cplx theta_quadrature(const OrderedForest& g, const std::vector<double>& omega, double t,
                      int order = 48) {
  GL gl(order);
  auto ch = g.children();
  cplx out(1, 0);
  for (int32_t r : g.roots()) out *= theta_quadrature_subtree(ch, omega, r, t, gl);
  return out;
}

OrderedForest random_forest(Rng& rng, int n) {
  OrderedForest g;
  g.parent.resize(n);
  for (int i = 0; i < n; ++i)
    g.parent[i] = (i == 0) ? -1 : int32_t(rng.next_u64() % (i + 1)) - 1;  // -1 or [0,i)
  return g;
}

}  // namespace

TEST_CASE("single node kernel") {
  OrderedForest g;
  g.parent = {-1};
  double om = 0.7;
  auto e = theta(g, {om});
  double t = 1.3;
  cplx expect = (std::polar(1.0, kTwoPi * t * om) - 1.0) / cplx(0, kTwoPi * om);
  CHECK(std::abs(e.eval(t) - expect) < 1e-12);
  auto e0 = theta(g, {0.0});
  CHECK(std::abs(e0.eval(t) - t) < 1e-14);
}

TEST_CASE("two-node chain at zero frequency is t^2/2") {
  OrderedForest g;
  g.parent = {-1, 0};
  auto e = theta(g, {0.0, 0.0});
  CHECK(std::abs(e.eval(2.0) - 2.0) < 1e-13);
  CHECK(std::abs(e.eval(0.5) - 0.125) < 1e-13);
}

TEST_CASE("root with three leaf children at zero frequency is t^4/4") {
  OrderedForest g;
  g.parent = {-1, 0, 0, 0};
  auto e = theta(g, std::vector<double>(4, 0.0));
  // linear-extension oracle: e(G)/n! = 3!/4! = 1/4
  CHECK_EQ(linear_extension_count(g), 6);
  CHECK(std::abs(e.eval(1.0) - 0.25) < 1e-13);
}

TEST_CASE("hook-length counts") {
  OrderedForest chain;
  chain.parent = {-1, 0, 1, 2};
  CHECK_EQ(linear_extension_count(chain), 1);
  OrderedForest anti;
  anti.parent = {-1, -1, -1, -1};
  CHECK_EQ(linear_extension_count(anti), 24);
  OrderedForest two;
  two.parent = {-1, -1};
  CHECK_EQ(linear_extension_count(two), 2);
}

TEST_CASE("theta at omega=0, t=1 equals e(G)/n! for random forests") {
  Rng rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    int n = 1 + int(rng.next_u64() % 6);
    OrderedForest g = random_forest(rng, n);
    auto e = theta(g, std::vector<double>(n, 0.0));
    double expect = double(linear_extension_count(g));
    for (int i = 1; i <= n; ++i) expect /= i;
    double got = e.eval(1.0).real();
    CHECK(std::abs(got - expect) <= 1e-12 * std::abs(expect));
    CHECK(std::abs(e.eval(1.0).imag()) < 1e-13);
  }
}

TEST_CASE("theta equals direct simplex quadrature at random frequencies") {
  Rng rng(103);
  for (int rep = 0; rep < 60; ++rep) {
    int n = 1 + int(rng.next_u64() % 3);
    OrderedForest g = random_forest(rng, n);
    std::vector<double> om(n);
    for (auto& w : om) w = 3.0 * (2.0 * rng.next_double() - 1.0);
    double t = 0.2 + 1.5 * rng.next_double();
    cplx exact = theta(g, om).eval(t);
    cplx quad = theta_quadrature(g, om, t);
    CHECK(std::abs(exact - quad) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("scaling identity: theta_t(omega) = t^n theta_1(t*omega)") {
  Rng rng(107);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 1 + int(rng.next_u64() % 5);
    OrderedForest g = random_forest(rng, n);
    std::vector<double> om(n), tom(n);
    double t = 0.3 + 2.0 * rng.next_double();
    for (int i = 0; i < n; ++i) {
      om[i] = 2.0 * rng.next_double() - 1.0;
      tom[i] = t * om[i];
    }
    cplx lhs = theta(g, om).eval(t);
    double tn = std::pow(t, n);
    cplx rhs = tn * theta(g, tom).eval(1.0);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("forest kernel factorizes over roots") {
  Rng rng(109);
  OrderedForest a = random_forest(rng, 3);
  OrderedForest b = random_forest(rng, 2);
  OrderedForest both;
  both.parent = a.parent;
  for (auto p : b.parent) both.parent.push_back(p < 0 ? -1 : p + a.size());
  std::vector<double> oa = {0.3, -0.9, 0.4}, ob = {1.1, -0.2};
  std::vector<double> oboth = oa;
  oboth.insert(oboth.end(), ob.begin(), ob.end());
  double t = 0.8;
  cplx lhs = theta(both, oboth).eval(t);
  cplx rhs = theta(a, oa).eval(t) * theta(b, ob).eval(t);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("secular growth: resonant primitive raises the power") {
  OrderedForest g;
  g.parent = {-1, 0};
  // child frequency om, root frequency -om: inner kernel has a term at
  // frequency om which the outer integral hits with nu = -om
  auto e = theta(g, {-0.5, 0.5});
  bool has_power2 = false;
  for (auto& term : e.terms())
    if (term.p >= 1 && std::abs(term.c) > 1e-14) has_power2 = true;
  CHECK(has_power2);
  cplx quad = theta_quadrature(g, {-0.5, 0.5}, 1.7);
  CHECK(std::abs(e.eval(1.7) - quad) < 1e-8);
}

TEST_CASE("decay bound") {
  Rng rng(113);
  OrderedForest g;
  g.parent = {-1, 0, 0};
  // omega = 0: bound is t^n
  CHECK(std::abs(decay_bound(g, {0, 0, 0}, 2.0) - 8.0) < 1e-12);
  // single node: |theta| <= bound up to a modest constant
  OrderedForest one;
  one.parent = {-1};
  for (int rep = 0; rep < 100; ++rep) {
    double om = 4.0 * (2.0 * rng.next_double() - 1.0);
    double t = 0.1 + 2.0 * rng.next_double();
    double exact = std::abs(theta(one, {om}).eval(t));
    double bound = decay_bound(one, {om}, t);
    CHECK(exact <= 4.0 * bound + 1e-12);
  }
}

TEST_CASE("kernel bound with fitted constant <= 4 on random forests") {
  Rng rng(127);
  double worst = 0;
  for (int rep = 0; rep < 150; ++rep) {
    int n = 1 + int(rng.next_u64() % 5);
    OrderedForest g = random_forest(rng, n);
    std::vector<double> om(n);
    for (auto& w : om) w = 6.0 * (2.0 * rng.next_double() - 1.0);
    double t = 0.2 + 2.0 * rng.next_double();
    double exact = std::abs(theta(g, om).eval(t));
    double bound = decay_bound(g, om, t);
    if (bound > 0) worst = std::max(worst, std::pow(exact / bound, 1.0 / n));
  }
  CHECK(worst <= 4.0);
}
