#pragma once

#include <optional>
#include <string>

#include "nlslab/field.hpp"

namespace nlslab {

// Real potential on the grid. Built from a symbolic kind or a tabulated
// field; the sampled values and the negative part V_- = min(V, 0) are cached
// at construction.
class PotentialSpec {
 public:
  static PotentialSpec zero(const GridSpec& grid);
  // depth > 0 produces an attractive well V = -depth exp(-|x|^2/width^2).
  static PotentialSpec gaussian_well(const GridSpec& grid, double depth,
                                     double width);
  // V = strength / max(|x|, cutoff)^exponent (repulsive for strength > 0).
  static PotentialSpec truncated_inverse_power(const GridSpec& grid,
                                               double strength, double exponent,
                                               double cutoff);
  static PotentialSpec tabulated(const SpectralField& f);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  const std::vector<double>& negative_part() const { return neg_; }
  bool is_zero() const { return kind_ == "zero"; }
  const std::string& kind() const { return kind_; }

 private:
  PotentialSpec(GridSpec grid, std::vector<double> samples, std::string kind);
  GridSpec grid_;
  std::vector<double> samples_;
  std::vector<double> neg_;
  std::string kind_;
};

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

// sup_x of the cell quadrature of |V(y)| / |x - y| with the self-cell
// replaced by the exact kernel integral over an equal-volume ball; the
// kernel uses the minimum-image distance on the torus. Requires d >= 3.
double kato_norm(const PotentialSpec& v, const GridSpec& grid);
double kato_norm_negative_part(const PotentialSpec& v, const GridSpec& grid);

// L^{d/2} quadrature of |V|; companion for V_- alone.
double lhalf_norm(const PotentialSpec& v, const GridSpec& grid);
double lhalf_norm_negative_part(const PotentialSpec& v, const GridSpec& grid);

struct AdmissibilityReport {
  double kato_norm = 0.0;
  double kato_norm_neg = 0.0;
  double lhalf_norm = 0.0;
  double threshold = 0.0;  // d(d-2) alpha(d)
  double alpha_d = 0.0;
  bool admissible = false;
};

AdmissibilityReport admissibility(const PotentialSpec& v, const GridSpec& grid);

// Attractive Gaussian well scaled so that its negative-part Kato norm sits
// at the requested fraction of the admissibility threshold.
PotentialSpec default_well(const GridSpec& grid, double width = 1.0,
                           double kato_fraction = 0.5);

}  // namespace nlslab
