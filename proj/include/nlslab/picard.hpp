#pragma once

#include "nlslab/spacetime.hpp"

namespace nlslab {

// Forced cubic NLS local solver: iterates the Duhamel map
//   Phi(v)(t) = e^{itH} v0 + i sign int_0^t e^{i(t-s)H} |F+v|^2 (F+v)(s) ds
// to a fixed point; u = F + v then solves the cubic equation whenever F is a
// linear-flow trajectory.
struct PicardConfig {
  double delta = 0.05;   // smallness gate
  int max_iter = 25;
  double tol = 1e-8;     // sup-in-time H^1 increment
  double t_end = 0.25;
  double dt = 1.0 / 64.0;
  double sign = 1.0;     // nonlinearity sign, +1 focusing

  void validate() const {
    if (!(delta > 0.0)) throw validation_error("picard: delta must be > 0");
    if (!(tol > 0.0)) throw validation_error("picard: tol must be > 0");
    if (!(dt > 0.0 && t_end > 0.0))
      throw validation_error("picard: dt and t_end must be > 0");
  }
};

struct GateResult {
  double free_x = 0.0;     // ||e^{itH} v0||_X(I)
  double forcing_y = 0.0;  // ||F||_Y(I)
  bool passes = false;
};

GateResult smallness_gate(const SpectralField& v0, const TrajectorySeries& F,
                          const PotentialSpec& pot, const PicardConfig& cfg,
                          const NormConfig& ncfg);

struct PicardResult {
  TrajectorySeries v;
  TrajectorySeries u;  // F + v
  std::vector<double> increments;
  std::vector<double> contraction_factors;
  bool converged = false;
  bool aborted_nan = false;
  double fixed_point_residual = 0.0;
  GateResult gate;
};

PicardResult picard_solve(const SpectralField& v0, const TrajectorySeries& F,
                          const PotentialSpec& pot, const PicardConfig& cfg,
                          const NormConfig& ncfg);

struct ContinuationRow {
  double t_end = 0.0;
  GateResult gate;
  bool converged = false;
};

// Doubles then bisects the horizon to bracket the largest gate-passing
// interval for the forcing e^{itH} f_omega with v0 = 0.
std::vector<ContinuationRow> continuation_scan(const SpectralField& f_omega,
                                               const PotentialSpec& pot,
                                               const PicardConfig& cfg,
                                               const NormConfig& ncfg,
                                               double t_max = 8.0,
                                               double rel_tol = 1e-2);

}  // namespace nlslab
