#pragma once

#include "nlslab/groundstate.hpp"
#include "nlslab/picard.hpp"
#include "nlslab/randomize.hpp"

namespace nlslab {

// H^1 distance to the phase/translation orbit of u_a: inf over phase theta
// and shifts y of ||u - e^{i theta} u_a(. - y)||_{H^1}. The phase is closed
// form; lattice shifts come from one FFT cross-correlation, refined by
// per-axis quadratic interpolation.
double orbit_distance(const SpectralField& u, const SpectralField& u_a);

struct PerturbationSpec {
  enum class Kind { deterministic_h1, random_rough };
  Kind kind = Kind::deterministic_h1;
  double size = 1e-3;
  uint64_t seed = 1;
  double s = 0.6;  // H^s regularity of the rough profile (s < 1)

  void validate() const {
    if (!(size > 0.0)) throw validation_error("perturbation: size must be > 0");
    if (kind == Kind::random_rough && !(s < 1.0))
      throw validation_error("perturbation: rough case requires s < 1");
  }
};

// Builds the perturbation field (mean-free of the requested norm size).
SpectralField make_perturbation(const GridSpec& grid, const PerturbationSpec& pert);

struct StabilityTrace {
  std::vector<double> times;
  std::vector<double> orbit_dist;
  std::vector<double> mass_drift;    // relative to t = 0
  std::vector<double> energy_drift;  // relative to t = 0
  double epsilon_budget = 0.0;
  bool stayed_within = false;
  double t_exit = -1.0;  // first crossing, -1 when none
  bool aborted = false;  // blowup-suspect abort
  double pert_h1 = 0.0;
  double pert_hs = 0.0;

  double max_dist() const;
};

struct StabilityOptions {
  double budget_factor = 10.0;  // epsilon budget = factor * perturbation size
  int sample_stride = 0;        // 0 -> about 100 samples over the horizon
};

StabilityTrace stability_experiment(const GroundStateResult& gs,
                                    const PerturbationSpec& pert,
                                    double horizon, const EvolveConfig& cfg,
                                    const PotentialSpec& v,
                                    const StabilityOptions& opts = {});

struct AlmostSureSummary {
  std::vector<StabilityTrace> traces;
  double fraction_within = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

// Monte Carlo of rough random perturbations at H^s size delta; reports the
// empirical fraction meeting the budget with a Wilson 95% interval.
AlmostSureSummary almost_sure_stability_experiment(
    const GroundStateResult& gs, double s, double delta, int n_samples,
    double horizon, const EvolveConfig& cfg, const PotentialSpec& v,
    uint64_t seed, const StabilityOptions& opts = {});

struct PerturbationCompareResult {
  double sup_h1_diff = 0.0;
  double x_norm_diff = 0.0;
  double forcing_y = 0.0;
  bool forced_converged = false;
};

// Unforced cubic solution from u0 against the forced solution with forcing F
// (same initial data), per the short/long-time perturbation comparisons.
PerturbationCompareResult perturbation_compare(const SpectralField& u0,
                                               const TrajectorySeries& F,
                                               const PotentialSpec& v,
                                               const PicardConfig& cfg,
                                               const NormConfig& ncfg);

}  // namespace nlslab
