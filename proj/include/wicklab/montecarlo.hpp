#ifndef WICKLAB_MONTECARLO_HPP
#define WICKLAB_MONTECARLO_HPP

#include "wicklab/decorations.hpp"
#include "wicklab/profile.hpp"

namespace wicklab {

// One draw of the Gaussian initial data: independent standard complex
// Gaussians (E|g|^2 = 1) on the truncated lattice.
struct GaussianField {
  LatticeSpec spec;
  std::vector<VecZ> modes;  // lexicographically sorted, |m| <= radius * L
  std::vector<cplx> g;
  uint64_t seed = 0;
  uint64_t sample_index = 0;

  int index_of(const VecZ& m) const;  // -1 if outside the truncation
};

std::vector<VecZ> lattice_modes(const LatticeSpec& spec);
GaussianField sample_field(const LatticeSpec& spec, uint64_t seed, uint64_t sample_index = 0);

// Chaos amplitude J^n_{t,k} of the Dyson expansion for one field sample, at
// kinetic coupling lambda = L^{-alpha/2}.  Orders n <= 2; products of
// Gaussians are Wick-ordered per mode (complex Hermite polynomials), so
// repeated-mode interactions carry their self-pairing subtractions.
cplx dyson_amplitude(int n, double t, const VecZ& k, const GaussianField& field, double alpha,
                     const InitialProfile& profile, uint64_t cap = 20'000'000);

// Precomputed kernel for fast re-evaluation across samples at fixed (n,t,k).
class DysonKernel {
 public:
  DysonKernel(int n, double t, const VecZ& k, const LatticeSpec& spec, double alpha,
              const InitialProfile& profile, uint64_t cap = 20'000'000);
  cplx evaluate(const GaussianField& field) const;
  int order() const { return n_; }

 private:
  int n_;
  VecZ k_;
  double psi_k_ = 0;
  int k_mode_ = -1;
  struct Term {
    int32_t i1, i2, i3;
    int8_t pattern;
    cplx coef;
  };
  std::vector<Term> terms_;                 // n = 1
  struct Term5 {
    std::array<int32_t, 5> idx;
    cplx coef;
  };
  std::vector<Term5> terms5_;               // n = 2
  std::array<int8_t, 5> signs5_{};
};

struct WickReport {
  cplx mc_estimate;
  double stderr_re = 0, stderr_im = 0;
  cplx target;
  double z = 0;
  uint64_t nsamples = 0;
};

// Sample mean of J^n_{t,k} conj(J^{n'}_{t,k'}) against its diagrammatic value
// (the couple-sum spectrum on the diagonal, zero off it).
WickReport wick_crosscheck(int n, int n2, double t, const VecZ& k, const VecZ& k2,
                           const LatticeSpec& spec, double alpha, const InitialProfile& profile,
                           uint64_t nsamples, uint64_t seed, int threads = 0);

}  // namespace wicklab

#endif  // WICKLAB_MONTECARLO_HPP
