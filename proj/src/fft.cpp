#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace nlslab::fft {

namespace {

// FFTW planning is not thread-safe; plan creation is serialized and plans are
// reused via the new-array execute interface. FFTW_UNALIGNED keeps the plans
// valid for arbitrary caller buffers.
std::mutex plan_mutex;

fftw_plan get_plan(const std::vector<int>& dims, int sign) {
  static std::map<std::pair<std::vector<int>, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(dims, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  std::vector<cplx> a(n), b(n);
  fftw_plan plan = fftw_plan_dft(
      static_cast<int>(dims.size()), dims.data(),
      reinterpret_cast<fftw_complex*>(a.data()),
      reinterpret_cast<fftw_complex*>(b.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

void forward(const std::vector<int>& dims, const cplx* in, cplx* out) {
  fftw_plan plan = get_plan(dims, FFTW_FORWARD);
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void backward(const std::vector<int>& dims, const cplx* in, cplx* out) {
  fftw_plan plan = get_plan(dims, FFTW_BACKWARD);
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace nlslab::fft
