#ifndef WICKLAB_KINETIC_HPP
#define WICKLAB_KINETIC_HPP

#include <functional>

#include "wicklab/profile.hpp"
#include "wicklab/quadrature.hpp"

namespace wicklab {

// Uniform symmetric grids for the kinetic unknowns.  x axes with one point
// are homogeneous directions; mz = 1 means no subordinate wavenumber.
struct KGrid {
  int d = 3;
  double k_max = 3.0;
  int mk = 17;
  std::array<int, kMaxDim> mx{1, 1, 1, 1};
  double x_max = 0.0;
  int mz = 1;
  double z_max = 0.0;

  void validate() const;
  double hk() const { return mk > 1 ? 2.0 * k_max / (mk - 1) : 1.0; }
  double hx() const;
  double hz() const { return mz > 1 ? 2.0 * z_max / (mz - 1) : 1.0; }
  int nk() const;
  int nx() const;
  int nz() const;
  VecR k_of(int flat) const;
  VecR x_of(int flat) const;
  VecR z_of(int flat) const;
};

enum class StateKind { W, E };

// W states: data[x][k]; E states: data[x][k][z].
struct KineticState {
  KGrid grid;
  StateKind kind = StateKind::W;
  double time = 0;
  std::vector<double> data;

  size_t index(int ix, int ik, int iz = 0) const;
  double sup_norm() const;
};

KineticState make_w_state(const KGrid& g, const std::function<double(const VecR&, const VecR&)>& w0);
KineticState make_e_state(const KGrid& g,
                          const std::function<double(const VecR&, const VecR&, const VecR&)>& e0);

// multilinear interpolation of one x-slice in k, zero outside the grid
double interp_w(const KineticState& s, int ix, const VecR& k);

// collision rates (the transport term is handled by the splitting)
void collision_wk(const KineticState& s, const ResonantRule& rule, KineticState& rate,
                  int threads = 0);
void collision_wk2(const KineticState& s, const ResonantRule& rule, KineticState& rate,
                   int threads = 0);

// semi-Lagrangian shift x -> x - dt k on the axes with more than one point
KineticState transport_shift(const KineticState& s, double dt);

// trapezoid zeta-marginal of an E state, producing a W state on the same grid
KineticState marginalize_zeta(const KineticState& e);

struct SolveOptions {
  double T = 0.25;
  double dt = 0.025;
  bool transport_on = false;  // alpha = beta switch
  double blowup_guard = 1e3;  // instability error when sup grows by this factor
  int threads = 0;
  int record_stride = 0;  // 0: record endpoints only
};

struct Trajectory {
  std::vector<double> times;
  std::vector<KineticState> states;
  const KineticState& final_state() const { return states.back(); }
};

// classical RK4 in time, Strang-split with transport when it is switched on
Trajectory solve_rk4(const KineticState& s0, const ResonantRule& rule, const SolveOptions& opt);

// Duhamel (Picard) iteration from a t-independent initial datum: the m-th
// iterate is a degree-m polynomial in t whose coefficients live on the grid,
//   Whats_m(k) = (2/m) sum_{m1+m2+m3=m-1} int delta(Omega) prod Whats_{mj}(k_j),
// with the m=0 factor evaluated analytically.
struct PicardExpansion {
  KGrid grid;
  std::vector<std::vector<double>> coeff;  // coeff[m][k index] (x homogeneous)

  // evaluate the expansion at time t on the grid
  KineticState at_time(double t) const;
};

// analytic_order0: evaluate the initial datum analytically inside the
// quadrature (exact diagram matching); otherwise interpolate it from the grid
// like every later iterate (consistent with the RK4 route).  cubic_interp
// upgrades the coefficient interpolation to separable 4-point Lagrange
// (sharper diagram comparisons; the solvers pair with trilinear).
PicardExpansion picard_terms(const KGrid& g,
                             const std::function<double(const VecR&)>& w0_analytic,
                             const ResonantRule& rule, int orders, int threads = 0,
                             bool analytic_order0 = true, bool cubic_interp = false);

// fixed-point Picard solve: extend the expansion until the newest term moves
// the solution by less than tol at t = T (throws BudgetError when max_orders
// is hit first)
KineticState solve_picard(const KGrid& g, const std::function<double(const VecR&)>& w0_analytic,
                          const ResonantRule& rule, double T, double tol = 1e-8,
                          int max_orders = 20, int threads = 0, bool analytic_order0 = true);

}  // namespace wicklab

#endif  // WICKLAB_KINETIC_HPP
