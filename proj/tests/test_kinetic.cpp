#include "doctest.h"
#include "wicklab/kinetic.hpp"
#include "wicklab/spectra.hpp"

#include <cmath>

using namespace wicklab;

namespace {

InitialProfile test_profile() {
  InitialProfile p;
  p.d = 3;
  p.a = kPi;
  p.b = 1.0;
  p.amplitude = 0.5;  // keeps T=0.25 inside the local regime
  p.spectral_radius = 2.5;
  return p;
}

KGrid small_w_grid() {
  KGrid g;
  g.d = 3;
  g.k_max = 3.0;
  g.mk = 13;
  return g;
}

ResonantRule small_rule() {
  ResonantQuadrature q{6, 5, 8, 5, 8, 2.5, 2.5};
  return build_resonant_rule(q);
}

}  // namespace

TEST_CASE("grid indexing round-trips") {
  KGrid g = small_w_grid();
  g.validate();
  CHECK_EQ(g.nk(), 13 * 13 * 13);
  VecR k = g.k_of(0);
  CHECK(std::abs(k.v[0] + 3.0) < 1e-15);
  VecR mid = g.k_of(g.nk() / 2);
  CHECK(std::abs(mid.v[0]) < 1e-12);
  CHECK(std::abs(mid.v[1]) < 1e-12);
  CHECK(std::abs(mid.v[2]) < 1e-12);
  KGrid bad = g;
  bad.mk = 12;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("interpolation is exact on grid points and affine data") {
  KGrid g = small_w_grid();
  auto w0 = [](const VecR&, const VecR& k) { return 1.0 + 0.5 * k.v[0] - 0.25 * k.v[2]; };
  KineticState s = make_w_state(g, w0);
  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    VecR k{2.8 * (2 * rng.next_double() - 1), 2.8 * (2 * rng.next_double() - 1),
           2.8 * (2 * rng.next_double() - 1)};
    CHECK(std::abs(interp_w(s, 0, k) - w0(VecR{0, 0, 0}, k)) < 1e-12);
  }
  // outside the grid reads zero
  CHECK_EQ(interp_w(s, 0, VecR{3.5, 0.0, 0.0}), 0.0);
}

TEST_CASE("WK collision: zero state, positivity, MC cross-check at k=0") {
  auto p = test_profile();
  KGrid g = small_w_grid();
  auto rule = small_rule();
  KineticState zero = make_w_state(g, [](const VecR&, const VecR&) { return 0.0; });
  KineticState rate;
  collision_wk(zero, rule, rate);
  CHECK_EQ(rate.sup_norm(), 0.0);

  KineticState s = make_w_state(g, [&](const VecR&, const VecR& k) { return p.psi2(k); });
  collision_wk(s, rule, rate);
  double mn = 1e300;
  for (double v : rate.data) mn = std::min(mn, v);
  CHECK(mn >= 0.0);

  // MC oracle at k = 0 (radial Gaussian data), against a converged rule
  auto f = [&](const VecR& k1, const VecR& k2, const VecR& k3) {
    return interp_w(s, 0, k1) * interp_w(s, 0, k2) * interp_w(s, 0, k3);
  };
  auto mc = resonant_integral_mc(VecR{0.0, 0.0, 0.0}, f, 400000, 1234, 1.2);
  auto fine = build_resonant_rule(ResonantQuadrature{});
  double det = resonant_integral(fine, VecR{0.0, 0.0, 0.0}, f);
  CHECK(std::abs(det - mc.value) <= 3.0 * mc.std_error);
  // the solver's rate at k=0 uses the coarse rule; percent-level agreement
  double coarse = rate.data[rate.index(0, g.nk() / 2)] / 2.0;
  CHECK(std::abs(coarse - det) < 0.02 * det);
}

TEST_CASE("transport shift: exactness and inverses") {
  KGrid g;
  g.d = 3;
  g.k_max = 2.0;
  g.mk = 5;
  g.mx = {9, 1, 1, 1};
  g.x_max = 4.0;
  auto w0 = [](const VecR& x, const VecR& k) {
    return (1.0 + 0.25 * x.v[0]) * std::exp(-norm2(k));  // affine in x
  };
  KineticState s = make_w_state(g, w0);
  double dt = 0.5;
  KineticState moved = transport_shift(s, dt);
  // interior points shift exactly for affine-in-x data
  for (int ix = 2; ix < 7; ++ix)
    for (int ik = 0; ik < g.nk(); ++ik) {
      VecR x = g.x_of(ix), k = g.k_of(ik);
      if (std::abs(x.v[0] - dt * k.v[0]) > 3.9) continue;  // source outside
      double expect = w0(VecR{x.v[0] - dt * k.v[0], 0.0, 0.0}, k);
      CHECK(std::abs(moved.data[moved.index(ix, ik)] - expect) < 1e-12);
    }
  // k = 0 slice unchanged; constant-in-x data unchanged
  int k0 = g.nk() / 2;
  for (int ix = 0; ix < 9; ++ix)
    CHECK(std::abs(moved.data[moved.index(ix, k0)] - s.data[s.index(ix, k0)]) < 1e-14);
  // round trip up to interpolation error
  KineticState back = transport_shift(moved, -dt);
  for (int ix = 3; ix < 6; ++ix)
    for (int ik = 0; ik < g.nk(); ++ik) {
      VecR x = g.x_of(ix), k = g.k_of(ik);
      if (std::abs(x.v[0]) + std::abs(dt * k.v[0]) > 3.5) continue;
      CHECK(std::abs(back.data[back.index(ix, ik)] - s.data[s.index(ix, ik)]) < 1e-10);
    }
}

TEST_CASE("marginalization of separable E states") {
  KGrid g;
  g.d = 3;
  g.k_max = 2.0;
  g.mk = 5;
  g.mz = 9;
  g.z_max = 2.0;
  auto rho = [](const VecR& z) { return std::exp(-kPi * norm2(z)); };
  auto wfun = [](const VecR& k) { return std::exp(-norm2(k)); };
  KineticState e = make_e_state(
      g, [&](const VecR&, const VecR& k, const VecR& z) { return wfun(k) * rho(z); });
  KineticState w = marginalize_zeta(e);
  // trapezoid integral of rho over the grid
  double mass = 0;
  for (int iz = 0; iz < g.nz(); ++iz) {
    double wt = 1;
    int f = iz;
    for (int i = 0; i < 3; ++i) {
      int j = f % g.mz;
      f /= g.mz;
      wt *= (j == 0 || j == g.mz - 1) ? 0.5 : 1.0;
    }
    mass += wt * rho(g.z_of(iz));
  }
  mass *= std::pow(g.hz(), 3);
  for (int ik = 0; ik < g.nk(); ++ik)
    CHECK(std::abs(w.data[w.index(0, ik)] - wfun(g.k_of(ik)) * mass) < 1e-12);
  // zero E marginalizes to zero
  KineticState z0 = make_e_state(g, [](const VecR&, const VecR&, const VecR&) { return 0.0; });
  CHECK_EQ(marginalize_zeta(z0).sup_norm(), 0.0);
}

TEST_CASE("WK-2 collision marginalizes to the WK collision") {
  auto p = test_profile();
  KGrid g;
  g.d = 3;
  g.k_max = 3.0;
  g.mk = 7;
  g.mz = 7;
  g.z_max = 1.6;
  ResonantQuadrature q{4, 4, 6, 3, 6, 4.0, 4.0};
  auto rule = build_resonant_rule(q);
  // separable data: E = W(k) rho(zeta)
  double c = 2.0 * kPi;
  KineticState e = make_e_state(g, [&](const VecR&, const VecR& k, const VecR& z) {
    return p.psi2(k) * std::exp(-c * norm2(z)) * std::pow(2.0, 1.5);
  });
  KineticState w = marginalize_zeta(e);
  KineticState k_rate, e_rate;
  collision_wk2(e, rule, e_rate);
  KineticState e_rate_marg = marginalize_zeta(e_rate);
  // WK collision of the marginal state on the same grid
  collision_wk(w, rule, k_rate);
  double sup = 0, diff = 0;
  for (int ik = 0; ik < g.nk(); ++ik) {
    sup = std::max(sup, std::abs(k_rate.data[k_rate.index(0, ik)]));
    diff = std::max(diff, std::abs(k_rate.data[k_rate.index(0, ik)] -
                                   e_rate_marg.data[e_rate_marg.index(0, ik)]));
  }
  CHECK(sup > 0);
  // trapezoid-vs-plain-sum boundary weights and zeta truncation set the gap
  CHECK(diff < 5e-2 * sup);
}

TEST_CASE("RK4 basics: zero data stays zero, blowup guard trips") {
  KGrid g = small_w_grid();
  auto rule = small_rule();
  KineticState zero = make_w_state(g, [](const VecR&, const VecR&) { return 0.0; });
  SolveOptions opt;
  opt.T = 0.1;
  opt.dt = 0.05;
  auto traj = solve_rk4(zero, rule, opt);
  CHECK_EQ(traj.final_state().sup_norm(), 0.0);
  CHECK(traj.times.size() >= 2);

  auto p = test_profile();
  KineticState big = make_w_state(g, [&](const VecR&, const VecR& k) { return 50.0 * p.psi2(k); });
  SolveOptions explode;
  explode.T = 2.0;
  explode.dt = 0.25;
  explode.blowup_guard = 10.0;
  CHECK_THROWS_AS(solve_rk4(big, rule, explode), BudgetError);
}

TEST_CASE("mass is nondecreasing under the WK flow") {
  auto p = test_profile();
  KGrid g = small_w_grid();
  auto rule = small_rule();
  KineticState s = make_w_state(g, [&](const VecR&, const VecR& k) { return p.psi2(k); });
  SolveOptions opt;
  opt.T = 0.2;
  opt.dt = 0.05;
  opt.record_stride = 1;
  auto traj = solve_rk4(s, rule, opt);
  double prev = -1;
  for (auto& st : traj.states) {
    double mass = 0;
    for (double v : st.data) mass += v;
    CHECK(mass >= prev - 1e-12);
    prev = mass;
  }
}

TEST_CASE("Picard expansion: first terms and solver agreement") {
  auto p = test_profile();
  KGrid g = small_w_grid();
  g.mk = 9;
  auto rule = small_rule();
  auto w0 = [&](const VecR& k) { return p.psi2(k); };
  auto ex = picard_terms(g, w0, rule, 2);
  REQUIRE_EQ(ex.coeff.size(), 3);
  // order-1 coefficient: 2 int delta(Omega) prod psi^2, pointwise
  int ik0 = g.nk() / 2;
  double direct = 2.0 * resonant_integral(rule, g.k_of(ik0),
                                          [&](const VecR& k1, const VecR& k2, const VecR& k3) {
                                            return w0(k1) * w0(k2) * w0(k3);
                                          });
  CHECK(std::abs(ex.coeff[1][ik0] - direct) < 1e-12 * std::abs(direct));

  // RK4 and Picard agree at T = 0.25 within 1e-3 relative
  double T = 0.25;
  KineticState pic = solve_picard(g, w0, rule, T, 1e-8, 25, 0, false);
  KineticState s0 = make_w_state(g, [&](const VecR&, const VecR& k) { return w0(k); });
  SolveOptions opt;
  opt.T = T;
  opt.dt = 0.025;
  auto traj = solve_rk4(s0, rule, opt);
  double sup = 0, diff = 0;
  for (size_t i = 0; i < pic.data.size(); ++i) {
    sup = std::max(sup, std::abs(pic.data[i]));
    diff = std::max(diff, std::abs(pic.data[i] - traj.final_state().data[i]));
  }
  CHECK(diff < 1e-3 * sup);

  // non-convergence error outside the small-time regime
  CHECK_THROWS_AS(solve_picard(g, w0, rule, 50.0, 1e-8, 4), BudgetError);
}

TEST_CASE("first Picard iterate equals the order-<=1 diagram sum") {
  auto p = test_profile();
  KGrid g = small_w_grid();
  auto rule = small_rule();
  auto w0 = [&](const VecR& k) { return p.psi2(k); };
  auto ex = picard_terms(g, w0, rule, 1);
  double t = 0.3;
  VecR k = g.k_of(g.nk() / 2 + 1);
  double kin = 0;
  for (auto& c : enumerate_regular_couples(1)) kin += kinetic_limit_spectrum(c, t, k, p, rule);
  double pic1 = interp_w(ex.at_time(t), 0, k) - w0(k);
  CHECK(std::abs(kin - pic1) < 1e-10 * std::abs(kin));
}
