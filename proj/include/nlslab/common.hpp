#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

// Thread budget for embarrassingly parallel loops (Monte Carlo samples,
// per-dyadic work). Capped by the NLSLAB_THREADS environment variable.
int thread_budget();

// Runs fn(i) for i in [0, n). Results must be written into pre-sized slots
// indexed by i; any reduction afterwards happens in fixed index order, so
// output does not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nlslab
