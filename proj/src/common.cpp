#include "wicklab/common.hpp"

#include <atomic>
#include <cstdio>

namespace wicklab {

std::string hex64(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {
std::atomic<int> g_threads{0};
}

int default_threads() {
  int t = g_threads.load();
  if (t > 0) return t;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

void set_default_threads(int n) { g_threads.store(n); }

void parallel_for(int64_t n, const std::function<void(int64_t, int64_t)>& chunk_fn,
                  int threads) {
  if (n <= 0) return;
  int t = threads > 0 ? threads : default_threads();
  if (t > n) t = int(n);
  if (t <= 1) {
    chunk_fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  int64_t chunk = (n + t - 1) / t;
  for (int i = 0; i < t; ++i) {
    int64_t lo = i * chunk;
    int64_t hi = std::min<int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace wicklab
