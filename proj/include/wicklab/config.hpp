#ifndef WICKLAB_CONFIG_HPP
#define WICKLAB_CONFIG_HPP

#include <string>
#include <vector>

#include "wicklab/kinetic.hpp"
#include "wicklab/profile.hpp"
#include "wicklab/quadrature.hpp"

namespace wicklab {

// One structured configuration drives every experiment; flags override
// fields.  beta <= 0 encodes beta = infinity (the periodic regime).
struct ExperimentConfig {
  int d = 3;
  std::vector<double> L_sweep{2, 4, 8};
  double alpha = 1.0;
  double beta = -1.0;  // infinity
  double T = 0.25;
  double dt = 0.025;
  double t_kinetic = 0.5;

  InitialProfile profile;
  ResonantQuadrature quadrature;         // spectra / diagram evaluation
  ResonantQuadrature solver_quadrature;  // WK collision operator
  ResonantQuadrature wk2_quadrature;     // WK-2 collision operator
  int time_order = 12;
  uint64_t mc_samples = 10000;
  uint64_t seed = 20240817;
  uint64_t enumeration_cap = 10'000'000;
  uint64_t scan_cap = 4'000'000'000ull;
  int threads = 0;
  std::string out_dir = ".";

  KGrid w_grid;   // homogeneous WK default
  KGrid e_grid;   // WK-2 default (with zeta axes)

  double lambda(double L) const { return std::pow(L, -alpha / 2.0); }
  double epsilon(double L) const { return beta > 0 ? std::pow(L, -beta) : 0.0; }
  bool homogeneous() const { return beta <= 0; }
  bool transport_on() const { return beta > 0 && std::abs(alpha - beta) < 1e-12; }

  void validate() const;
  std::string canonical_json() const;
  std::string hash() const;
};

ExperimentConfig default_config();
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace wicklab

#endif  // WICKLAB_CONFIG_HPP
