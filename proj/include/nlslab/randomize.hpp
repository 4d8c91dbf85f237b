#pragma once

#include <functional>

#include "nlslab/projections.hpp"
#include "nlslab/rng.hpp"

namespace nlslab {

// Wiener randomization plan: one complex Gaussian g_k per unit lattice
// point, derived deterministically from the seed. deterministic_ones
// replaces every g_k by 1, which reduces the randomization to the partition
// of unity (useful as an identity check).
struct RandomSeedPlan {
  uint64_t seed = 0;
  bool deterministic_ones = false;

  cplx coefficient(const std::vector<int>& k) const {
    if (deterministic_ones) return cplx(1.0, 0.0);
    return rng::unit_complex_gaussian(seed, rng::lattice_counter(k));
  }
};

// f^omega = sum_k g_k P_k f, evaluated as a single mode-space multiplier.
SpectralField randomize(const SpectralField& f, const RandomSeedPlan& plan);

// Empirical L^p_omega norm of sum_n c_n g_n over n_samples draws, plus the
// ratio against sqrt(p) * ||c||_2.
struct MomentEstimate {
  double lp_norm = 0.0;
  double ratio = 0.0;  // lp_norm / (sqrt(p) ||c||_2)
};
MomentEstimate moment_estimate(const std::vector<cplx>& coeffs, double p,
                               int n_samples, const RandomSeedPlan& plan);

struct TailReport {
  std::vector<double> lambdas;
  std::vector<double> empirical_prob;
  double fitted_slope = 0.0;  // slope of log p against lambda^2
  double r_squared = 0.0;
  int n_samples = 0;
  bool degenerate = false;
};

// Exceedance statistics of a sample functional (e.g. a Y-norm of the free
// evolution) over per-seed randomizations of f.
TailReport tail_diagnostic(const SpectralField& f,
                           const std::function<double(const SpectralField&)>& norm_eval,
                           const std::vector<double>& lambdas, int n_samples,
                           const RandomSeedPlan& plan);

}  // namespace nlslab
