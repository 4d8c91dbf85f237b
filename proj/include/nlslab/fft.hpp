#pragma once

#include <vector>

#include "nlslab/common.hpp"

namespace nlslab::fft {

// Multidimensional complex DFT, dims = points per axis, last axis fastest.
// forward:  out[j] = sum_i in[i] exp(-2*pi*I j.i/m)   (unnormalized)
// backward: out[i] = sum_j in[j] exp(+2*pi*I j.i/m)
// Plans are cached per shape; in and out must be distinct buffers.
void forward(const std::vector<int>& dims, const cplx* in, cplx* out);
void backward(const std::vector<int>& dims, const cplx* in, cplx* out);

}  // namespace nlslab::fft
