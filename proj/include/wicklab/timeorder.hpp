#ifndef WICKLAB_TIMEORDER_HPP
#define WICKLAB_TIMEORDER_HPP

#include <cstdint>
#include <vector>

#include "wicklab/common.hpp"

namespace wicklab {

// Frequencies closer than this to a cancellation are treated as resonant
// (the primitive then raises the polynomial power instead of dividing).
// Assumes frequencies pre-scaled to O(1).
inline constexpr double kResonanceTol = 1e-12;

// Finite sum of terms c * t^p * exp(2*pi*i*t*f), closed under +, *, and the
// primitive int_0^t exp(2*pi*i*s*nu) (.) ds.
class ExpPoly {
 public:
  struct Term {
    cplx c;
    int p = 0;
    double f = 0;
  };

  ExpPoly() = default;
  static ExpPoly zero() { return ExpPoly(); }
  static ExpPoly one() {
    ExpPoly e;
    e.terms_.push_back({cplx(1, 0), 0, 0.0});
    return e;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ExpPoly& operator+=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly& operator*=(const ExpPoly& o) { return *this = *this * o; }
  ExpPoly& operator*=(cplx s);

  // multiply by exp(2*pi*i*t*freq)
  ExpPoly& shift_frequency(double freq);
  // int_0^t exp(2*pi*i*s*nu) * this(s) ds
  ExpPoly primitive(double nu) const;

  cplx eval(double t) const;
  size_t size() const { return terms_.size(); }

 private:
  void normalize();
  std::vector<Term> terms_;
};

// Forest of rooted trees; ancestry is the strict partial order.  parent[i] < i
// is not required, but parents must be acyclic.
struct OrderedForest {
  std::vector<int32_t> parent;  // -1 for roots

  int size() const { return static_cast<int>(parent.size()); }
  std::vector<int32_t> roots() const;
  std::vector<std::vector<int32_t>> children() const;
  void validate() const;
};

// Exact time-ordered kernel Theta_t[G](omega) as a closed-form function of t:
// per root, Theta = int_0^t e^{2 pi i s w_r} prod_children Theta_s ds, and the
// forest kernel is the product over roots.
ExpPoly theta(const OrderedForest& g, const std::vector<double>& omega);

// Number of linear extensions of the ancestry order (hook length formula).
uint64_t linear_extension_count(const OrderedForest& g);

// t^n * sup over sign assignments mu of prod_g 1/<t*mu(omega)_g>, the
// right-hand side shape of the kernel decay estimate.
double decay_bound(const OrderedForest& g, const std::vector<double>& omega, double t);

}  // namespace wicklab

#endif  // WICKLAB_TIMEORDER_HPP
