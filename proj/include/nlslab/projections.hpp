#pragma once

#include <memory>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

// Dyadic scales 2^j resolvable on the grid. The range is wide enough that
// the annulus multipliers telescope to 1 on every nonzero lattice frequency:
// the lowest scale sits below the smallest nonzero |xi|, the highest at or
// above the box-corner |xi|.
std::vector<double> dyadic_scales(const GridSpec& grid);
bool in_dyadic_band(const GridSpec& grid, double n);

// P_N: annulus multiplier varphi(|xi|/N) - varphi(2|xi|/N).
SpectralField lp_project(const SpectralField& f, double n);
// P_{<=N}: varphi(|xi|/N).
SpectralField lp_project_low(const SpectralField& f, double n);

// Integer lattice points k with psi(xi - k) != 0 for some grid frequency.
struct UnitLatticePoint {
  std::vector<int> k;
  double l2_weight_sq;  // sum over modes of |psi_k(xi)|^2 (unnormalized use)
};

// Precomputed normalized unit-scale partition psi(xi-k)/sum_k' psi(xi-k')
// for one grid, stored sparsely per lattice point. Shared and cached.
class UnitPartition {
 public:
  explicit UnitPartition(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t lattice_size() const { return points_.size(); }
  const std::vector<int>& lattice_point(std::size_t idx) const;
  // (mode flat index, normalized weight) pairs for lattice point idx.
  const std::vector<std::pair<std::size_t, double>>& weights(std::size_t idx) const;
  // Index into the lattice enumeration, or npos when k is out of band.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const std::vector<int>& k) const;

  static std::shared_ptr<const UnitPartition> get(const GridSpec& grid);

 private:
  GridSpec grid_;
  std::vector<std::vector<int>> lattice_;
  std::vector<std::vector<std::pair<std::size_t, double>>> points_;
  int kmax_ = 0;
};

// P_k f per Eq-style unit-scale projection (normalized partition of unity).
SpectralField unit_project(const SpectralField& f, const std::vector<int>& k);

// P_{N,e_l}: multiplier phi_dir(|xi . e_l| / N); ell is 1-based.
SpectralField directional_project(const SpectralField& f, double n, int ell);

}  // namespace nlslab
