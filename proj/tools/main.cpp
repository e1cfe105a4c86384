// wicklab command line: configuration-driven experiments over the diagram
// combinatorics, lattice sums, kinetic solvers and Monte Carlo validation.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wicklab/acceptance.hpp"
#include "wicklab/config.hpp"
#include "wicklab/couples.hpp"
#include "wicklab/kinetic.hpp"
#include "wicklab/montecarlo.hpp"
#include "wicklab/oscillatory.hpp"
#include "wicklab/serialization.hpp"
#include "wicklab/spectra.hpp"
#include "wicklab/timeorder.hpp"

namespace fs = std::filesystem;
using namespace wicklab;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  uint64_t seed = 0;
  bool have_seed = false;
};

ExperimentConfig make_config(const CommonArgs& args) {
  ExperimentConfig cfg = args.config_path.empty() ? default_config() : load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.threads > 0) cfg.threads = args.threads;
  if (args.have_seed) cfg.seed = args.seed;
  cfg.validate();
  if (cfg.threads > 0) set_default_threads(cfg.threads);
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream out(p);
  if (!out) throw ValidationError("cannot open output file " + p.string());
  return out;
}

int run_enumerate(const ExperimentConfig& cfg, int order, bool regular, bool trees_only,
                  bool emit) {
  auto out = open_out(cfg, regular ? "enumerate_regular.csv" : "enumerate.csv");
  out << "kind,order,count,config_hash\n";
  if (trees_only) {
    auto ts = enumerate_trees(order, +1, cfg.enumeration_cap);
    out << "tree," << order << "," << ts.size() << "," << cfg.hash() << "\n";
    std::cout << "trees of order " << order << ": " << ts.size() << "\n";
    if (emit) {
      auto txt = open_out(cfg, "trees.txt");
      for (auto& t : ts) txt << to_string(t) << "\n";
    }
    return 0;
  }
  uint64_t count = regular ? regular_couple_count(order) : couple_count(order);
  if (count > cfg.enumeration_cap) throw CapacityError("enumeration exceeds configured cap");
  std::ofstream txt;
  if (emit) txt = open_out(cfg, regular ? "couples_regular.txt" : "couples.txt");
  uint64_t seen = 0;
  auto visit = [&](const Couple& c) {
    ++seen;
    if (emit) txt << to_string(c) << "\n";
    return true;
  };
  if (regular)
    enumerate_regular_couples(order, visit);
  else
    enumerate_couples(order, visit);
  out << (regular ? "regular_couple," : "couple,") << order << "," << seen << "," << cfg.hash()
      << "\n";
  std::cout << (regular ? "regular couples" : "couples") << " of order " << order << ": " << seen
            << "\n";
  return 0;
}

int run_count_lattice(const ExperimentConfig& cfg, int order, double radius, double q_halfwidth) {
  auto out = open_out(cfg, "count_lattice.csv");
  out << "L,alpha,couple,order,count,normalized,config_hash\n";
  std::vector<Couple> picks;
  if (order <= 1) {
    picks.push_back(enumerate_couples(1)[0]);
  } else {
    enumerate_couples(order, [&](const Couple& c) {
      if (!is_regular(c)) {
        picks.push_back(c);
        return false;
      }
      return true;
    });
  }
  for (auto& c : picks) {
    int n = c.order;
    for (double L : cfg.L_sweep) {
      LatticeSpec spec{L, cfg.d, radius};
      double gamma = std::pow(L, cfg.alpha);
      uint64_t cnt = count_quasi_resonant(c, VecZ(cfg.d), spec, -q_halfwidth, q_halfwidth, gamma,
                                          cfg.scan_cap);
      double norm = double(cnt) / std::pow(L, n * (2.0 * cfg.d - cfg.alpha));
      out << L << "," << cfg.alpha << "," << c.canonical_key() << "," << n << "," << cnt << ","
          << norm << "," << cfg.hash() << "\n";
      std::cout << "L=" << L << " order=" << n << " count=" << cnt << " normalized=" << norm
                << "\n";
    }
  }
  return 0;
}

int run_theta(const ExperimentConfig& cfg, const std::vector<int>& parents,
              const std::vector<double>& omega, int nt) {
  OrderedForest g;
  for (int p : parents) g.parent.push_back(p);
  if (g.size() == 0) g.parent = {-1};
  std::vector<double> om = omega;
  om.resize(g.size(), 0.0);
  auto e = theta(g, om);
  auto out = open_out(cfg, "theta.csv");
  out << "t,re,im,decay_bound,config_hash\n";
  for (int i = 1; i <= nt; ++i) {
    double t = cfg.T * i / nt;
    cplx v = e.eval(t);
    out << t << "," << v.real() << "," << v.imag() << "," << decay_bound(g, om, t) << ","
        << cfg.hash() << "\n";
  }
  std::cout << "theta table with " << nt << " rows, kernel terms: " << e.size() << "\n";
  return 0;
}

int run_osc_converge(const ExperimentConfig& cfg, const std::vector<double>& alphas) {
  auto out = open_out(cfg, "osc_converge.csv");
  out << "L,alpha,value_re,value_im,reference,abs_error,config_hash\n";
  SeparableTestFunction phi = gaussian_test_function(1, cfg.d);
  double ref = osc_functional_infinity(scale_theta_infinity(phi), 1e-10).real();
  for (double alpha : alphas) {
    for (double L : cfg.L_sweep) {
      cplx v = osc_functional(scale_theta(phi, L, alpha), L);
      out << L << "," << alpha << "," << v.real() << "," << v.imag() << "," << ref << ","
          << std::abs(v - ref) << "," << cfg.hash() << "\n";
      std::cout << "alpha=" << alpha << " L=" << L << " err=" << std::abs(v - ref) << "\n";
    }
  }
  return 0;
}

int run_spectrum(const ExperimentConfig& cfg) {
  auto out = open_out(cfg, "spectrum.csv");
  out << "couple,L,t,kx,ky,kz,value,reference,error,config_hash\n";
  auto rule = build_resonant_rule(cfg.quadrature);
  auto regs = enumerate_regular_couples(1);
  double t = cfg.t_kinetic;
  for (auto& c : regs) {
    for (double L : cfg.L_sweep) {
      for (double kx : {0.0, 0.5}) {
        int32_t m = int32_t(llround(kx * L));
        if (std::abs(m / L - kx) > 1e-9) continue;  // keep k on the lattice
        VecZ k(cfg.d);
        k.v[0] = m;
        VecR kr = to_real(k, 1.0 / L);
        double tl = t * std::pow(L, cfg.alpha);
        cplx v = finite_L_spectrum(c, tl, k, L, cfg.alpha, cfg.profile, 0, cfg.scan_cap);
        double ref = kinetic_limit_spectrum(c, t, kr, cfg.profile, rule);
        out << c.canonical_key() << "," << L << "," << t << "," << kr.v[0] << "," << kr.v[1]
            << "," << kr.v[2] << "," << v.real() << "," << ref << "," << std::abs(v.real() - ref)
            << "," << cfg.hash() << "\n";
        std::cout << "L=" << L << " k=" << kr.v[0] << " N=" << v.real() << " limit=" << ref
                  << "\n";
      }
    }
  }
  return 0;
}

void write_trajectory(const ExperimentConfig& cfg, const Trajectory& traj,
                      const std::string& stem) {
  // binary container: magic, counts, raw doubles; JSON sidecar carries the
  // grid spec, times and config hash
  fs::path bin_path = fs::path(cfg.out_dir) / (stem + ".bin");
  std::ofstream bin(bin_path, std::ios::binary);
  const char magic[8] = {'W', 'K', 'T', 'R', 'A', 'J', '0', '1'};
  bin.write(magic, 8);
  uint64_t nstates = traj.states.size();
  uint64_t npoints = traj.states.empty() ? 0 : traj.states[0].data.size();
  bin.write(reinterpret_cast<const char*>(&nstates), 8);
  bin.write(reinterpret_cast<const char*>(&npoints), 8);
  for (auto& s : traj.states)
    bin.write(reinterpret_cast<const char*>(s.data.data()), std::streamsize(8 * s.data.size()));

  json side;
  side["config_hash"] = cfg.hash();
  side["times"] = traj.times;
  side["points_per_state"] = npoints;
  const KGrid& g = traj.states.empty() ? cfg.w_grid : traj.states[0].grid;
  side["grid"] = {{"d", g.d},         {"k_max", g.k_max}, {"mk", g.mk},
                  {"x_max", g.x_max}, {"mz", g.mz},       {"z_max", g.z_max}};
  std::ofstream(fs::path(cfg.out_dir) / (stem + ".json")) << side.dump(2) << "\n";

  // CSV slice along the first k axis at the final time
  auto csv = open_out(cfg, stem + "_slice.csv");
  csv << "k1,value,config_hash\n";
  const KineticState& fin = traj.final_state();
  int mid = g.mk / 2;
  for (int i = 0; i < g.mk; ++i) {
    int flat = (i * g.mk + mid) * g.mk + mid;
    csv << (-g.k_max + i * g.hk()) << "," << fin.data[fin.index(0, flat)] << "," << cfg.hash()
        << "\n";
  }
}

int run_kinetic_solve(const ExperimentConfig& cfg, const std::string& equation,
                      const std::string& scheme) {
  if (equation == "wk") {
    auto rule = build_resonant_rule(cfg.solver_quadrature);
    auto w0 = [&](const VecR& k) { return cfg.profile.psi2(k); };
    if (scheme == "picard") {
      KineticState fin = solve_picard(cfg.w_grid, w0, rule, cfg.T, 1e-8, 20, cfg.threads);
      Trajectory traj;
      traj.times = {0.0, cfg.T};
      traj.states = {make_w_state(cfg.w_grid, [&](const VecR&, const VecR& k) { return w0(k); }),
                     fin};
      write_trajectory(cfg, traj, "wk_picard");
    } else if (scheme == "rk4") {
      KineticState s0 =
          make_w_state(cfg.w_grid, [&](const VecR&, const VecR& k) { return w0(k); });
      SolveOptions opt;
      opt.T = cfg.T;
      opt.dt = cfg.dt;
      opt.transport_on = cfg.transport_on();
      opt.threads = cfg.threads;
      opt.record_stride = 1;
      write_trajectory(cfg, solve_rk4(s0, rule, opt), "wk_rk4");
    } else {
      throw ValidationError("kinetic-solve: scheme must be rk4 or picard");
    }
    std::cout << "WK trajectory written under " << cfg.out_dir << "\n";
    return 0;
  }
  if (equation == "wk2") {
    auto rule = build_resonant_rule(cfg.wk2_quadrature);
    KineticState e0 = make_e_state(cfg.e_grid, [&](const VecR&, const VecR& k, const VecR& z) {
      return wigner(cfg.profile, k, VecR(cfg.d), z);
    });
    SolveOptions opt;
    opt.T = cfg.T;
    opt.dt = cfg.dt;
    opt.threads = cfg.threads;
    opt.record_stride = 1;
    write_trajectory(cfg, solve_rk4(e0, rule, opt), "wk2_rk4");
    std::cout << "WK-2 trajectory written under " << cfg.out_dir << "\n";
    return 0;
  }
  throw ValidationError("kinetic-solve: equation must be wk or wk2");
}

int run_mc_validate(const ExperimentConfig& cfg, double L, double radius) {
  LatticeSpec spec{L, cfg.d, radius};
  json rep;
  rep["config_hash"] = cfg.hash();
  rep["L"] = L;
  rep["radius"] = radius;
  rep["nsamples"] = cfg.mc_samples;
  auto add = [&](const char* name, const WickReport& r) {
    rep["checks"][name] = {{"estimate_re", r.mc_estimate.real()},
                           {"estimate_im", r.mc_estimate.imag()},
                           {"stderr_re", r.stderr_re},
                           {"stderr_im", r.stderr_im},
                           {"target_re", r.target.real()},
                           {"target_im", r.target.imag()},
                           {"z", r.z}};
    std::cout << name << ": z = " << r.z << "\n";
  };
  VecZ k(cfg.d), kp(cfg.d);
  k.v[0] = int32_t(L);  // |k| = 1
  kp.v[1] = int32_t(L);
  double t = 1.0;
  add("diag_order0", wick_crosscheck(0, 0, t, k, k, spec, cfg.alpha, cfg.profile, cfg.mc_samples,
                                     cfg.seed, cfg.threads));
  add("diag_order1", wick_crosscheck(1, 1, t, k, k, spec, cfg.alpha, cfg.profile, cfg.mc_samples,
                                     cfg.seed + 1, cfg.threads));
  add("cross_order", wick_crosscheck(0, 1, t, k, k, spec, cfg.alpha, cfg.profile, cfg.mc_samples,
                                     cfg.seed + 2, cfg.threads));
  add("cross_mode", wick_crosscheck(1, 1, t, k, kp, spec, cfg.alpha, cfg.profile, cfg.mc_samples,
                                    cfg.seed + 3, cfg.threads));
  auto out = open_out(cfg, "mc_validate.json");
  out << rep.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wicklab: wave-kinetic laboratory for the Wick NLS"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "JSON configuration file");
  app.add_option("--out", common.out_dir, "output directory (overrides config)");
  app.add_option("--threads", common.threads, "worker threads (0 = hardware)");
  auto* seed_opt = app.add_option("--seed", common.seed, "RNG seed (overrides config)");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "count and serialize diagrams");
  int order = 3;
  bool regular = false, trees_only = false, emit = false;
  enumerate_cmd->add_option("--order", order, "diagram order");
  enumerate_cmd->add_flag("--regular", regular, "regular couples only");
  enumerate_cmd->add_flag("--trees", trees_only, "signed ternary trees instead of couples");
  enumerate_cmd->add_flag("--emit", emit, "write the serialized diagrams");

  auto* count_cmd = app.add_subcommand("count-lattice", "quasi-resonant lattice counting sweeps");
  int count_order = 1;
  double count_radius = 1.0, q_halfwidth = 1.0;
  count_cmd->add_option("--order", count_order, "couple order (1 or 2)");
  count_cmd->add_option("--radius", count_radius, "decoration ball radius");
  count_cmd->add_option("--window", q_halfwidth, "resonance window half-width");

  auto* theta_cmd = app.add_subcommand("theta", "time-ordered kernel tables");
  std::vector<int> parents{-1, 0};
  std::vector<double> omegas;
  int nt = 32;
  theta_cmd->add_option("--parents", parents, "forest parent list (-1 for roots)");
  theta_cmd->add_option("--omega", omegas, "node frequencies");
  theta_cmd->add_option("--rows", nt, "number of table rows");

  auto* osc_cmd = app.add_subcommand("osc-converge", "Riemann-sum convergence sweeps");
  std::vector<double> alphas{0.5, 1.0};
  osc_cmd->add_option("--alphas", alphas, "scaling exponents");

  auto* spec_cmd = app.add_subcommand("spectrum", "finite-L vs kinetic-limit spectra");
  (void)spec_cmd;

  auto* kin_cmd = app.add_subcommand("kinetic-solve", "WK / WK-2 trajectories");
  std::string equation = "wk", scheme = "rk4";
  kin_cmd->add_option("--equation", equation, "wk or wk2");
  kin_cmd->add_option("--scheme", scheme, "rk4 or picard");

  auto* mc_cmd = app.add_subcommand("mc-validate", "Monte Carlo Wick cross-checks");
  double mc_L = 2.0, mc_radius = 2.0;
  mc_cmd->add_option("--L", mc_L, "box size");
  mc_cmd->add_option("--radius", mc_radius, "mode truncation radius");

  auto* acc_cmd = app.add_subcommand("acceptance", "run the full acceptance suite");
  (void)acc_cmd;

  CLI11_PARSE(app, argc, argv);
  common.have_seed = seed_opt->count() > 0;

  try {
    ExperimentConfig cfg = make_config(common);
    if (enumerate_cmd->parsed()) return run_enumerate(cfg, order, regular, trees_only, emit);
    if (count_cmd->parsed()) return run_count_lattice(cfg, count_order, count_radius, q_halfwidth);
    if (theta_cmd->parsed()) return run_theta(cfg, parents, omegas, nt);
    if (osc_cmd->parsed()) return run_osc_converge(cfg, alphas);
    if (spec_cmd->parsed()) return run_spectrum(cfg);
    if (kin_cmd->parsed()) return run_kinetic_solve(cfg, equation, scheme);
    if (mc_cmd->parsed()) return run_mc_validate(cfg, mc_L, mc_radius);
    if (acc_cmd->parsed()) {
      auto results = run_acceptance(cfg, std::cout);
      bool all = true;
      for (auto& r : results) all &= r.pass;
      auto out = open_out(cfg, "acceptance.json");
      json j;
      j["config_hash"] = cfg.hash();
      for (auto& r : results)
        j["criteria"].push_back({{"id", r.id},
                                 {"name", r.name},
                                 {"pass", r.pass},
                                 {"detail", r.detail},
                                 {"seconds", r.seconds}});
      out << j.dump(2) << "\n";
      return all ? 0 : 2;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
