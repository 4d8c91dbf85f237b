#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab {

// Periodic box [-L, L)^d sampled with m points per axis. The frequency
// lattice is {pi k / L : k integer, -m/2 <= k < m/2}; the single stored
// Nyquist mode carries the label k = -m/2 and is zeroed by derivative
// multipliers.
struct GridSpec {
  int d = 0;
  int m = 0;
  double half_len = 0.0;
  std::vector<double> axis_freq;  // frequency by FFT index, size m

  static GridSpec make(int d, int m, double half_len);

  std::size_t size() const;
  double dx() const { return 2.0 * half_len / m; }
  double cell_volume() const { return std::pow(dx(), d); }
  double volume() const { return std::pow(2.0 * half_len, d); }
  double freq_step() const { return M_PI / half_len; }
  // Largest frequency magnitude along one axis (the Nyquist label).
  double max_axis_freq() const { return freq_step() * (m / 2); }
  // Largest |xi| on the lattice (box corner).
  double max_freq() const { return max_axis_freq() * std::sqrt(double(d)); }
  bool is_nyquist_index(int j) const { return j == m / 2; }

  std::vector<int> dims() const { return std::vector<int>(d, m); }

  // Decomposes a flat index (row-major, last axis fastest) into per-axis
  // FFT indices. ax must have room for d entries.
  void unflatten(std::size_t flat, int* ax) const {
    for (int a = d - 1; a >= 0; --a) {
      ax[a] = static_cast<int>(flat % m);
      flat /= m;
    }
  }
  std::size_t flatten(const int* ax) const {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * m + static_cast<std::size_t>(ax[a]);
    return flat;
  }

  // Physical coordinate of sample index j along one axis.
  double axis_coord(int j) const { return -half_len + j * dx(); }

  // |xi|^2 at a flat mode index.
  double freq_norm_sq(std::size_t flat) const {
    double s = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      double f = axis_freq[flat % m];
      flat /= m;
      s += f * f;
    }
    return s;
  }

  bool operator==(const GridSpec& o) const {
    return d == o.d && m == o.m && half_len == o.half_len;
  }
};

}  // namespace nlslab
