#include "wicklab/timeorder.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wicklab {

namespace {
// merge key: power + frequency bucket
struct TermKey {
  int p;
  int64_t fq;  // frequency quantized to the resonance tolerance
  bool operator<(const TermKey& o) const { return p != o.p ? p < o.p : fq < o.fq; }
};
int64_t quantize(double f) { return llround(f / kResonanceTol); }
}  // namespace

void ExpPoly::normalize() {
  std::map<TermKey, Term> merged;
  for (const auto& t : terms_) {
    TermKey k{t.p, quantize(t.f)};
    auto it = merged.find(k);
    if (it == merged.end())
      merged.emplace(k, t);
    else
      it->second.c += t.c;
  }
  terms_.clear();
  for (auto& [k, t] : merged) {
    (void)k;
    if (std::abs(t.c) > 0) terms_.push_back(t);
  }
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly out;
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) out.terms_.push_back({x.c * y.c, x.p + y.p, x.f + y.f});
  out.normalize();
  return out;
}

ExpPoly& ExpPoly::operator*=(cplx s) {
  for (auto& t : terms_) t.c *= s;
  normalize();
  return *this;
}

ExpPoly& ExpPoly::shift_frequency(double freq) {
  for (auto& t : terms_) t.f += freq;
  return *this;
}

ExpPoly ExpPoly::primitive(double nu) const {
  // term-by-term: int_0^t s^p e^{2 pi i s w} ds with w = f + nu
  ExpPoly out;
  for (const auto& t : terms_) {
    double w = t.f + nu;
    if (std::abs(w) < kResonanceTol) {
      out.terms_.push_back({t.c / double(t.p + 1), t.p + 1, 0.0});
      continue;
    }
    // by parts: I_p = t^p e^{2 pi i t w}/(2 pi i w) - p/(2 pi i w) I_{p-1}
    cplx inv(0, 0);
    inv = cplx(1, 0) / cplx(0, kTwoPi * w);
    cplx coef = t.c;
    for (int p = t.p; p >= 0; --p) {
      out.terms_.push_back({coef * inv, p, w});
      if (p == 0) break;
      coef *= -double(p) * inv;
    }
    // boundary at s=0: only the p=0 stage contributes -coef*inv * e^0
    out.terms_.push_back({-coef * inv, 0, 0.0});
  }
  out.normalize();
  return out;
}

cplx ExpPoly::eval(double t) const {
  cplx s(0, 0);
  for (const auto& term : terms_) {
    double tp = 1;
    for (int i = 0; i < term.p; ++i) tp *= t;
    s += term.c * tp * std::polar(1.0, kTwoPi * t * term.f);
  }
  return s;
}

std::vector<int32_t> OrderedForest::roots() const {
  std::vector<int32_t> r;
  for (int32_t i = 0; i < size(); ++i)
    if (parent[i] < 0) r.push_back(i);
  return r;
}

std::vector<std::vector<int32_t>> OrderedForest::children() const {
  std::vector<std::vector<int32_t>> ch(size());
  for (int32_t i = 0; i < size(); ++i)
    if (parent[i] >= 0) ch[parent[i]].push_back(i);
  return ch;
}

void OrderedForest::validate() const {
  for (int32_t i = 0; i < size(); ++i) {
    int32_t a = i;
    int steps = 0;
    while (a >= 0) {
      if (parent[a] >= size()) throw ValidationError("forest: parent out of range");
      a = parent[a];
      if (++steps > size()) throw ValidationError("forest: cycle in parent pointers");
    }
  }
}

namespace {

ExpPoly theta_subtree(const std::vector<std::vector<int32_t>>& ch,
                      const std::vector<double>& omega, int32_t node) {
  ExpPoly prod = ExpPoly::one();
  for (int32_t c : ch[node]) prod *= theta_subtree(ch, omega, c);
  return prod.primitive(omega[node]);
}

}  // namespace

ExpPoly theta(const OrderedForest& g, const std::vector<double>& omega) {
  if (static_cast<int>(omega.size()) != g.size())
    throw ValidationError("theta: omega size mismatch");
  g.validate();
  auto ch = g.children();
  ExpPoly out = ExpPoly::one();
  for (int32_t r : g.roots()) out *= theta_subtree(ch, omega, r);
  return out;
}

uint64_t linear_extension_count(const OrderedForest& g) {
  g.validate();
  int n = g.size();
  // subtree sizes
  std::vector<int> sz(n, 1);
  // process nodes in an order where children come first
  std::vector<int> depth(n, 0);
  for (int i = 0; i < n; ++i) {
    int32_t a = g.parent[i];
    while (a >= 0) {
      ++depth[i];
      a = g.parent[a];
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] > depth[b]; });
  for (int i : order)
    if (g.parent[i] >= 0) sz[g.parent[i]] += sz[i];
  // e(F) = n! / prod_v sz(v)
  if (n > 25) throw CapacityError("linear_extension_count: forest too large");
  unsigned __int128 num = 1, den = 1;
  for (int i = 1; i <= n; ++i) num *= static_cast<unsigned>(i);
  for (int s : sz) den *= static_cast<unsigned>(s);
  return static_cast<uint64_t>(num / den);
}

double decay_bound(const OrderedForest& g, const std::vector<double>& omega, double t) {
  if (t <= 0) throw ValidationError("decay_bound: t must be positive");
  g.validate();
  int n = g.size();
  std::vector<int32_t> nonroots;
  for (int32_t i = 0; i < n; ++i)
    if (g.parent[i] >= 0) nonroots.push_back(i);
  // descendant lists
  std::vector<std::vector<int32_t>> desc(n);
  for (int32_t i = 0; i < n; ++i)
    for (int32_t a = g.parent[i]; a >= 0; a = g.parent[a]) desc[a].push_back(i);
  double best = 0;
  uint64_t m = nonroots.size();
  if (m > 24) throw CapacityError("decay_bound: too many sign assignments");
  for (uint64_t mask = 0; mask < (1ull << m); ++mask) {
    std::vector<int> mu(n, 0);
    for (uint64_t j = 0; j < m; ++j)
      if (mask & (1ull << j)) mu[nonroots[j]] = 1;
    double prod = 1;
    for (int32_t gnode = 0; gnode < n; ++gnode) {
      double w = omega[gnode];
      for (int32_t dnode : desc[gnode]) w += mu[dnode] * omega[dnode];
      prod /= std::sqrt(1.0 + t * w * t * w);
    }
    best = std::max(best, prod);
  }
  double tn = 1;
  for (int i = 0; i < n; ++i) tn *= t;
  return tn * best;
}

}  // namespace wicklab
