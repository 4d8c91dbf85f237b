#pragma once

#include <string>

#include "nlslab/field.hpp"

namespace nlslab {

// "NLSF" binary snapshot: magic 4E 4C 53 46, u32 version=1, u8 d, u32 m,
// f64 half_len, f64 timestamp, then m^d complex values as interleaved
// little-endian f64 pairs, row-major with the last axis fastest.
void write_nlsf(const std::string& path, const SpectralField& f,
                double timestamp);

struct NlsfSnapshot {
  SpectralField field;
  double timestamp = 0.0;
};

NlsfSnapshot read_nlsf(const std::string& path);

}  // namespace nlslab
