#include "wicklab/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wicklab {

using nlohmann::json;

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.profile.d = 3;
  c.profile.a = kPi;
  c.profile.b = 1.0;
  c.profile.amplitude = 0.5;
  c.profile.spectral_radius = 2.5;

  c.w_grid.d = 3;
  c.w_grid.k_max = 3.0;
  c.w_grid.mk = 17;

  c.e_grid.d = 3;
  c.e_grid.k_max = 3.0;
  c.e_grid.mk = 9;
  c.e_grid.mz = 9;
  c.e_grid.z_max = 2.0;

  c.solver_quadrature = ResonantQuadrature{6, 5, 8, 5, 8, 2.5, 2.5};
  c.wk2_quadrature = ResonantQuadrature{4, 4, 6, 3, 6, 2.5, 2.5};
  return c;
}

void ExperimentConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw ValidationError("config.alpha: must lie in the open interval (0,2)");
  if (beta > 0 && beta < alpha)
    throw ValidationError("config.beta: must satisfy alpha <= beta (or be infinite)");
  if (d < 1 || d > kMaxDim) throw ValidationError("config.d: unsupported dimension");
  if (L_sweep.empty()) throw ValidationError("config.L_sweep: needs at least one box size");
  for (double L : L_sweep)
    if (L <= 0) throw ValidationError("config.L_sweep: box sizes must be positive");
  if (T < 0 || dt <= 0) throw ValidationError("config: T >= 0 and dt > 0 required");
  profile.validate();
  quadrature.validate();
  solver_quadrature.validate();
  wk2_quadrature.validate();
  w_grid.validate();
  e_grid.validate();
  // first collisions must stay inside the k-grid
  if (w_grid.k_max < profile.spectral_radius)
    throw ValidationError("config.w_grid.k_max: must contain the profile's spectral support");
}

namespace {

json to_json(const ExperimentConfig& c) {
  json j;
  j["d"] = c.d;
  j["L_sweep"] = c.L_sweep;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["t_kinetic"] = c.t_kinetic;
  j["profile"] = {{"amplitude", c.profile.amplitude}, {"a", c.profile.a},
                  {"b", c.profile.b},                 {"d", c.profile.d},
                  {"spectral_radius", c.profile.spectral_radius}};
  if (c.profile.k0.d > 0) {
    std::vector<double> k0(c.profile.k0.v.begin(), c.profile.k0.v.begin() + c.profile.k0.d);
    j["profile"]["k0"] = k0;
  }
  auto quad_json = [](const ResonantQuadrature& q) {
    return json{{"n_radial", q.n_radial},     {"n_costheta", q.n_costheta},
                {"n_phi", q.n_phi},           {"n_b_radial", q.n_b_radial},
                {"n_b_angle", q.n_b_angle},   {"r_max", q.r_max},
                {"b_max", q.b_max}};
  };
  j["quadrature"] = quad_json(c.quadrature);
  j["solver_quadrature"] = quad_json(c.solver_quadrature);
  j["wk2_quadrature"] = quad_json(c.wk2_quadrature);
  j["time_order"] = c.time_order;
  j["mc_samples"] = c.mc_samples;
  j["seed"] = c.seed;
  j["enumeration_cap"] = c.enumeration_cap;
  j["scan_cap"] = c.scan_cap;
  // threads and out_dir are runtime environment, not experiment identity, and
  // stay out of the canonical form so hashes are reproducible across machines
  auto grid_json = [](const KGrid& g) {
    json gj;
    gj["d"] = g.d;
    gj["k_max"] = g.k_max;
    gj["mk"] = g.mk;
    gj["mx"] = std::vector<int>(g.mx.begin(), g.mx.begin() + g.d);
    gj["x_max"] = g.x_max;
    gj["mz"] = g.mz;
    gj["z_max"] = g.z_max;
    return gj;
  };
  j["w_grid"] = grid_json(c.w_grid);
  j["e_grid"] = grid_json(c.e_grid);
  return j;
}

void grid_from_json(const json& gj, KGrid& g) {
  g.d = gj.value("d", g.d);
  g.k_max = gj.value("k_max", g.k_max);
  g.mk = gj.value("mk", g.mk);
  if (gj.contains("mx")) {
    auto mx = gj["mx"].get<std::vector<int>>();
    for (size_t i = 0; i < mx.size() && i < size_t(kMaxDim); ++i) g.mx[i] = mx[i];
  }
  g.x_max = gj.value("x_max", g.x_max);
  g.mz = gj.value("mz", g.mz);
  g.z_max = gj.value("z_max", g.z_max);
}

}  // namespace

std::string ExperimentConfig::canonical_json() const {
  return to_json(*this).dump();  // nlohmann objects iterate in sorted key order
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a64(canonical_json())); }

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c = default_config();
  try {
    c.d = j.value("d", c.d);
    if (j.contains("L_sweep")) c.L_sweep = j["L_sweep"].get<std::vector<double>>();
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("beta")) {
      if (j["beta"].is_string())
        c.beta = -1.0;  // "inf"
      else
        c.beta = j["beta"].get<double>();
    }
    c.T = j.value("T", c.T);
    c.dt = j.value("dt", c.dt);
    c.t_kinetic = j.value("t_kinetic", c.t_kinetic);
    if (j.contains("profile")) {
      const auto& p = j["profile"];
      c.profile.amplitude = p.value("amplitude", c.profile.amplitude);
      c.profile.a = p.value("a", c.profile.a);
      c.profile.b = p.value("b", c.profile.b);
      c.profile.d = p.value("d", c.d);
      c.profile.spectral_radius = p.value("spectral_radius", c.profile.spectral_radius);
      if (p.contains("k0")) {
        auto k0 = p["k0"].get<std::vector<double>>();
        c.profile.k0 = VecR(int(k0.size()));
        for (size_t i = 0; i < k0.size(); ++i) c.profile.k0.v[i] = k0[i];
      }
    }
    auto quad_from = [&](const char* key, ResonantQuadrature& qq) {
      if (!j.contains(key)) return;
      const auto& q = j[key];
      qq.n_radial = q.value("n_radial", qq.n_radial);
      qq.n_costheta = q.value("n_costheta", qq.n_costheta);
      qq.n_phi = q.value("n_phi", qq.n_phi);
      qq.n_b_radial = q.value("n_b_radial", qq.n_b_radial);
      qq.n_b_angle = q.value("n_b_angle", qq.n_b_angle);
      qq.r_max = q.value("r_max", qq.r_max);
      qq.b_max = q.value("b_max", qq.b_max);
    };
    quad_from("quadrature", c.quadrature);
    quad_from("solver_quadrature", c.solver_quadrature);
    quad_from("wk2_quadrature", c.wk2_quadrature);
    c.time_order = j.value("time_order", c.time_order);
    c.mc_samples = j.value("mc_samples", c.mc_samples);
    c.seed = j.value("seed", c.seed);
    c.enumeration_cap = j.value("enumeration_cap", c.enumeration_cap);
    c.scan_cap = j.value("scan_cap", c.scan_cap);
    c.threads = j.value("threads", c.threads);
    c.out_dir = j.value("out_dir", c.out_dir);
    if (j.contains("w_grid")) grid_from_json(j["w_grid"], c.w_grid);
    if (j.contains("e_grid")) grid_from_json(j["e_grid"], c.e_grid);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace wicklab
