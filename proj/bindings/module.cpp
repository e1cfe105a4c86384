// Python bindings for the main operations: diagram enumeration, kernels,
// lattice sums, spectra, kinetic solves and the Monte Carlo cross-checks.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wicklab/config.hpp"
#include "wicklab/couples.hpp"
#include "wicklab/decorations.hpp"
#include "wicklab/kinetic.hpp"
#include "wicklab/montecarlo.hpp"
#include "wicklab/oscillatory.hpp"
#include "wicklab/serialization.hpp"
#include "wicklab/spectra.hpp"
#include "wicklab/timeorder.hpp"

namespace py = pybind11;
using namespace wicklab;

namespace {

VecR vecr(const std::vector<double>& v) {
  VecR out(int(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out.v[i] = v[i];
  return out;
}

VecZ vecz(const std::vector<int32_t>& v) {
  VecZ out(int(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out.v[i] = v[i];
  return out;
}

InitialProfile profile_from_kwargs(double amplitude, double a, double b,
                                   const std::vector<double>& k0, double radius) {
  InitialProfile p;
  p.amplitude = amplitude;
  p.a = a;
  p.b = b;
  p.d = 3;
  p.spectral_radius = radius;
  if (!k0.empty()) p.k0 = vecr(k0);
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_wicklab, m) {
  m.doc() = "wave-kinetic laboratory for the Wick NLS";

  // --- combinatorics ---------------------------------------------------
  m.def("tree_count", &ternary_tree_count, py::arg("order"));
  m.def("couple_count", &couple_count, py::arg("order"));
  m.def("regular_couple_count", &regular_couple_count, py::arg("order"));
  m.def(
      "enumerate_trees",
      [](int order, int sign) {
        std::vector<std::string> out;
        for (auto& t : enumerate_trees(order, sign)) out.push_back(to_string(t));
        return out;
      },
      py::arg("order"), py::arg("sign") = 1);
  m.def(
      "enumerate_couples",
      [](int order, bool regular) {
        std::vector<std::string> out;
        auto visit = [&](const Couple& c) {
          out.push_back(to_string(c));
          return true;
        };
        if (regular)
          enumerate_regular_couples(order, visit);
        else
          enumerate_couples(order, visit);
        return out;
      },
      py::arg("order"), py::arg("regular") = false);
  m.def(
      "is_regular", [](const std::string& s) { return is_regular(couple_from_string(s)); },
      py::arg("couple"));
  m.def(
      "regular_index",
      [](const std::string& s) {
        return irreducible_factorization(couple_from_string(s)).regular_index;
      },
      py::arg("couple"));
  m.def(
      "polarity", [](const std::string& s) { return polarity(couple_from_string(s)); },
      py::arg("couple"));

  // --- resonance and kernels -------------------------------------------
  m.def(
      "resonance_factor",
      [](const std::vector<double>& k1, const std::vector<double>& k2,
         const std::vector<double>& k3) { return resonance_factor(vecr(k1), vecr(k2), vecr(k3)); },
      py::arg("k1"), py::arg("k2"), py::arg("k3"));
  m.def(
      "theta",
      [](const std::vector<int32_t>& parents, const std::vector<double>& omega, double t) {
        OrderedForest g;
        g.parent = parents;
        return theta(g, omega).eval(t);
      },
      py::arg("parents"), py::arg("omega"), py::arg("t"));
  m.def(
      "linear_extension_count",
      [](const std::vector<int32_t>& parents) {
        OrderedForest g;
        g.parent = parents;
        return linear_extension_count(g);
      },
      py::arg("parents"));
  m.def(
      "decay_bound",
      [](const std::vector<int32_t>& parents, const std::vector<double>& omega, double t) {
        OrderedForest g;
        g.parent = parents;
        return decay_bound(g, omega, t);
      },
      py::arg("parents"), py::arg("omega"), py::arg("t"));

  // --- oscillatory sums -------------------------------------------------
  m.def("gauss_sum", &gauss_sum, py::arg("s"), py::arg("r"), py::arg("h"), py::arg("N"));
  m.def("gauss_sum_moment", &gauss_sum_moment, py::arg("p"), py::arg("N"), py::arg("r") = 0.0,
        py::arg("h") = 0, py::arg("resolution") = 4);
  m.def(
      "osc_converge",
      [](double L, double alpha, int d) {
        SeparableTestFunction phi = gaussian_test_function(1, d);
        double ref = osc_functional_infinity(scale_theta_infinity(phi)).real();
        cplx v = osc_functional(scale_theta(phi, L, alpha), L);
        return py::make_tuple(v, ref, std::abs(v - ref));
      },
      py::arg("L"), py::arg("alpha"), py::arg("d") = 3);

  // --- lattice counting ---------------------------------------------------
  m.def(
      "count_quasi_resonant",
      [](const std::string& couple, const std::vector<int32_t>& k, double L, int d, double radius,
         double q, double gamma) {
        LatticeSpec spec{L, d, radius};
        return count_quasi_resonant(couple_from_string(couple), vecz(k), spec, -q, q, gamma);
      },
      py::arg("couple"), py::arg("k"), py::arg("L"), py::arg("d") = 3, py::arg("radius") = 1.0,
      py::arg("q") = 1.0, py::arg("gamma") = 1.0);

  // --- spectra -----------------------------------------------------------
  m.def(
      "finite_L_spectrum",
      [](const std::string& couple, double t, const std::vector<int32_t>& k, double L,
         double alpha, double amplitude, double a, double b, const std::vector<double>& k0,
         double radius) {
        auto p = profile_from_kwargs(amplitude, a, b, k0, radius);
        return finite_L_spectrum(couple_from_string(couple), t, vecz(k), L, alpha, p);
      },
      py::arg("couple"), py::arg("t"), py::arg("k"), py::arg("L"), py::arg("alpha") = 1.0,
      py::arg("amplitude") = 0.5, py::arg("a") = kPi, py::arg("b") = 1.0,
      py::arg("k0") = std::vector<double>{}, py::arg("radius") = 2.5);
  m.def(
      "kinetic_limit_spectrum",
      [](const std::string& couple, double t, const std::vector<double>& k, double amplitude,
         double a, double b, const std::vector<double>& k0, double radius) {
        auto p = profile_from_kwargs(amplitude, a, b, k0, radius);
        auto rule = build_resonant_rule(ResonantQuadrature{});
        return kinetic_limit_spectrum(couple_from_string(couple), t, vecr(k), p, rule);
      },
      py::arg("couple"), py::arg("t"), py::arg("k"), py::arg("amplitude") = 0.5,
      py::arg("a") = kPi, py::arg("b") = 1.0, py::arg("k0") = std::vector<double>{},
      py::arg("radius") = 2.5);
  m.def(
      "wigner",
      [](const std::vector<double>& k, const std::vector<double>& x,
         const std::vector<double>& zeta, double amplitude, double a, double b) {
        auto p = profile_from_kwargs(amplitude, a, b, {}, 2.5);
        return wigner(p, vecr(k), vecr(x), vecr(zeta));
      },
      py::arg("k"), py::arg("x"), py::arg("zeta"), py::arg("amplitude") = 0.5, py::arg("a") = kPi,
      py::arg("b") = 1.0);

  // --- kinetic solver ------------------------------------------------------
  m.def(
      "solve_wk",
      [](double T, double dt, double k_max, int mk, double amplitude, double b) {
        auto p = profile_from_kwargs(amplitude, kPi, b, {}, 2.5);
        KGrid g;
        g.d = 3;
        g.k_max = k_max;
        g.mk = mk;
        auto rule = build_resonant_rule(ResonantQuadrature{6, 5, 8, 5, 8, 2.5, 2.5});
        KineticState s0 = make_w_state(g, [&](const VecR&, const VecR& k) { return p.psi2(k); });
        SolveOptions opt;
        opt.T = T;
        opt.dt = dt;
        auto traj = solve_rk4(s0, rule, opt);
        return py::make_tuple(traj.times.back(), traj.final_state().data);
      },
      py::arg("T") = 0.25, py::arg("dt") = 0.05, py::arg("k_max") = 3.0, py::arg("mk") = 9,
      py::arg("amplitude") = 0.5, py::arg("b") = 1.0);

  // --- Monte Carlo ----------------------------------------------------------
  m.def(
      "wick_crosscheck",
      [](int n, int n2, double t, const std::vector<int32_t>& k, const std::vector<int32_t>& k2,
         double L, double radius, double alpha, uint64_t nsamples, uint64_t seed,
         double amplitude) {
        auto p = profile_from_kwargs(amplitude, kPi, 1.0, {}, radius);
        LatticeSpec spec{L, 3, radius};
        auto r = wick_crosscheck(n, n2, t, vecz(k), vecz(k2), spec, alpha, p, nsamples, seed);
        py::dict d;
        d["estimate"] = r.mc_estimate;
        d["target"] = r.target;
        d["stderr_re"] = r.stderr_re;
        d["stderr_im"] = r.stderr_im;
        d["z"] = r.z;
        return d;
      },
      py::arg("n"), py::arg("n2"), py::arg("t"), py::arg("k"), py::arg("k2"), py::arg("L") = 2.0,
      py::arg("radius") = 1.0, py::arg("alpha") = 1.0, py::arg("nsamples") = 2000,
      py::arg("seed") = 7, py::arg("amplitude") = 0.5);

  m.def("default_config_json", [] { return default_config().canonical_json(); });
  m.def("config_hash", [](const std::string& text) { return config_from_json(text).hash(); });
}
