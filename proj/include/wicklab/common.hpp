#ifndef WICKLAB_COMMON_HPP
#define WICKLAB_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace wicklab {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Largest spatial dimension supported by the fixed-capacity vector types.
inline constexpr int kMaxDim = 4;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Real d-vector, d <= kMaxDim.
struct VecR {
  std::array<double, kMaxDim> v{};
  int d = 0;

  VecR() = default;
  explicit VecR(int dim) : d(dim) {}
  VecR(std::initializer_list<double> xs) {
    d = static_cast<int>(xs.size());
    int i = 0;
    for (double x : xs) v[i++] = x;
  }
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }

  VecR& operator+=(const VecR& o) {
    for (int i = 0; i < d; ++i) v[i] += o.v[i];
    return *this;
  }
  VecR& operator-=(const VecR& o) {
    for (int i = 0; i < d; ++i) v[i] -= o.v[i];
    return *this;
  }
  friend VecR operator+(VecR a, const VecR& b) { return a += b; }
  friend VecR operator-(VecR a, const VecR& b) { return a -= b; }
  friend VecR operator*(double s, VecR a) {
    for (int i = 0; i < a.d; ++i) a.v[i] *= s;
    return a;
  }
};

inline double dot(const VecR& a, const VecR& b) {
  double s = 0;
  for (int i = 0; i < a.d; ++i) s += a.v[i] * b.v[i];
  return s;
}
inline double norm2(const VecR& a) { return dot(a, a); }

// Integer lattice vector (coordinates of k*L on Z^d); dot products are exact.
struct VecZ {
  std::array<int32_t, kMaxDim> v{};
  int d = 0;

  VecZ() = default;
  explicit VecZ(int dim) : d(dim) {}
  VecZ(std::initializer_list<int32_t> xs) {
    d = static_cast<int>(xs.size());
    int i = 0;
    for (int32_t x : xs) v[i++] = x;
  }
  int32_t& operator[](int i) { return v[i]; }
  int32_t operator[](int i) const { return v[i]; }

  VecZ& operator+=(const VecZ& o) {
    for (int i = 0; i < d; ++i) v[i] += o.v[i];
    return *this;
  }
  VecZ& operator-=(const VecZ& o) {
    for (int i = 0; i < d; ++i) v[i] -= o.v[i];
    return *this;
  }
  friend VecZ operator+(VecZ a, const VecZ& b) { return a += b; }
  friend VecZ operator-(VecZ a, const VecZ& b) { return a -= b; }
  friend bool operator==(const VecZ& a, const VecZ& b) {
    if (a.d != b.d) return false;
    for (int i = 0; i < a.d; ++i)
      if (a.v[i] != b.v[i]) return false;
    return true;
  }
};

inline int64_t dot(const VecZ& a, const VecZ& b) {
  int64_t s = 0;
  for (int i = 0; i < a.d; ++i) s += int64_t(a.v[i]) * b.v[i];
  return s;
}
inline int64_t norm2(const VecZ& a) { return dot(a, a); }

inline VecR to_real(const VecZ& m, double inv_scale) {
  VecR r(m.d);
  for (int i = 0; i < m.d; ++i) r[i] = m.v[i] * inv_scale;
  return r;
}

// splitmix64; the basis of all seeding so that streams are reproducible and
// splittable by (seed, index) without coordination.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic stream RNG; never touches std::random distributions so that
// outputs are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0) {
    uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x6a09e667f3bcc909ull * (stream + 1);
    state_ = splitmix64(s);
    if (state_ == 0) state_ = 0x2545f4914f6cdd1dull;
  }
  uint64_t next_u64() { return splitmix64(state_); }
  // uniform in [0,1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }
  // standard normal, Box-Muller
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double(), u2 = next_double();
    while (u1 <= 1e-300) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }
  // complex Gaussian with E|g|^2 = 1 (Re, Im independent, variance 1/2 each)
  cplx next_cgauss() {
    double re = next_normal(), im = next_normal();
    return cplx(re * std::sqrt(0.5), im * std::sqrt(0.5));
  }

 private:
  uint64_t state_;
  double spare_ = 0;
  bool have_spare_ = false;
};

// FNV-1a over a string; used for config hashes in emitted artifacts.
inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}
std::string hex64(uint64_t h);

// Chunked parallel map with deterministic reduction order.  Worker count
// changes never change results: chunks are merged in index order.
int default_threads();
void set_default_threads(int n);
void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& chunk_fn,
                  int threads = 0);

}  // namespace wicklab

#endif  // WICKLAB_COMMON_HPP
