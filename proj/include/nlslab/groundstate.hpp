#pragma once

#include "nlslab/evolution.hpp"

namespace nlslab {

// Constants of the two classical inequalities, estimated on the grid.
// gn_C is the estimator's best quotient inflated by the declared safety
// factor; sobolev_S is the raw sweep minimum (tests deflate it).
struct InequalityConstants {
  double sobolev_S = 0.0;
  double gn_C = 0.0;
  double beta = 0.0;  // d(1/2 - 1/q)
  int d = 0;
  double q = 0.0;

  double crit() const { return 2.0 * d / (d - 2.0); }  // 2* = 2d/(d-2)
};

constexpr double kGnSafetyFactor = 1.01;

struct GnEstimate {
  double raw = 0.0;       // best quotient reached by the ascent
  double inflated = 0.0;  // raw * kGnSafetyFactor
  int iterations = 0;
  bool diverged = false;
};

// Maximizes ||u||_q / (||grad u||_2^beta ||u||_2^{1-beta}) by preconditioned
// gradient ascent from a Gaussian seed; q = 2 returns exactly 1.
GnEstimate gn_quotient_maximize(int d, double q, const GridSpec& grid,
                                int max_iter = 3000);
double gn_constant_estimate(int d, double q, const GridSpec& grid);

struct SobolevEstimate {
  double value = 0.0;
  double best_sigma = 0.0;
};

// Minimizes ||grad u||_2^2 / ||u||_{2*}^2 over truncated bubble profiles
// (1+|x/sigma|^2)^{-(d-2)/2} with sigma swept at fixed fractions of the box.
SobolevEstimate sobolev_constant_sweep(int d, const GridSpec& grid);
double sobolev_constant_estimate(int d, const GridSpec& grid);

// Auxiliary lower-bound function of the energy and its closed forms.
double f_aux(double a, double rho, const InequalityConstants& c, double vneg);
double rho_max(double a, const InequalityConstants& c);
// Returns (K, a0); a0 = 0 with headroom <= 0.
std::pair<double, double> a_zero(const InequalityConstants& c, double vneg);

struct GroundStateConstants {
  InequalityConstants ineq;
  double vneg_lhalf = 0.0;
  double headroom = 0.0;  // (1 - ||V_-||_{d/2}/S)/2
  double K = 0.0;
  double a0 = 0.0;
  double rho0 = 0.0;  // rho_max at a0
};

GroundStateConstants groundstate_constants(const InequalityConstants& c,
                                           double vneg_lhalf);

struct OptimizerSettings {
  double tol = 1e-6;       // relative stationarity residual
  int max_iter = 6000;
  double tau0 = 0.25;
  double seed_width = 0.0;  // 0 -> default fraction of the box
  uint64_t seed = 1;
};

struct GroundStateResult {
  SpectralField u_a;
  double m_a = 0.0;
  double lambda = 0.0;
  double grad_norm_sq = 0.0;
  double residual = 0.0;  // Eq-(8.2)-style stationarity, relative to ||u||_H1
  int iterations = 0;
  bool converged = false;
  bool boundary_stall = false;
  std::vector<double> energy_log;
};

// Local minimization of I(u) over V(a) = S(a) intersect B_rho0 by projected,
// H^1-preconditioned descent from a real radial decreasing seed.
GroundStateResult minimize_local(double a, const GroundStateConstants& gsc,
                                 const PotentialSpec& v, const GridSpec& grid,
                                 const OptimizerSettings& opts);

struct McurvePoint {
  double a = 0.0;
  double m = 0.0;
  double lambda = 0.0;
  double grad_norm_sq = 0.0;
  bool converged = false;
  double multistart_spread = 0.0;  // max-min of I over the seeds
};

// m(a) by 3-seed multi-start local minimization, best kept per point.
std::vector<McurvePoint> m_curve(const std::vector<double>& a_list,
                                 const GroundStateConstants& gsc,
                                 const PotentialSpec& v, const GridSpec& grid,
                                 const OptimizerSettings& opts);

// Mixed-mode energy of the section-8 functional I(u).
double variational_energy(const SpectralField& u, const InequalityConstants& c,
                          const PotentialSpec& v);

}  // namespace nlslab
