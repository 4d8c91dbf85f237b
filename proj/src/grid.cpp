#include "nlslab/grid.hpp"

#include <atomic>
#include <cstdlib>

namespace nlslab {

namespace {
// Even and 3-smooth (2^a 3^b): keeps the FFT fast and the Nyquist row
// well-defined. Covers the power-of-two sizes and the 48^3 reference grid.
bool fft_friendly(int m) {
  if (m < 8 || m % 2 != 0) return false;
  while (m % 2 == 0) m /= 2;
  while (m % 3 == 0) m /= 3;
  return m == 1;
}
}  // namespace

GridSpec GridSpec::make(int d, int m, double half_len) {
  if (d < 1 || d > 4) throw validation_error("grid: d must be in 1..4");
  if (!fft_friendly(m))
    throw validation_error("grid: m must be even, 3-smooth (2^a 3^b) and >= 8");
  if (!(half_len > 0.0)) throw validation_error("grid: half_len must be > 0");

  GridSpec g;
  g.d = d;
  g.m = m;
  g.half_len = half_len;
  g.axis_freq.resize(m);
  const double step = M_PI / half_len;
  for (int j = 0; j < m; ++j) {
    int k = (j < m / 2) ? j : j - m;  // j == m/2 labeled -m/2
    g.axis_freq[j] = step * k;
  }
  return g;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(m);
  return n;
}

int thread_budget() {
  static int budget = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("NLSLAB_THREADS")) {
      int cap = std::atoi(env);
      if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
  }();
  return budget;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int workers = thread_budget();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace nlslab
