#pragma once

#include <functional>

#include "nlslab/potential.hpp"

namespace nlslab {

enum class Nonlinearity { cubic, mixed };

// Time-stepping configuration. Sign conventions: H := Delta - V throughout,
// the linear flow is e^{itH}, and the cubic equation reads
// i du/dt + Delta u - V u + sign |u|^2 u = 0 (sign = +1 focusing).
// The mixed nonlinearity is |u|^{q-2} u plus, when enabled, |u|^{2*-2} u
// with 2* = 2d/(d-2).
struct EvolveConfig {
  double dt = 1e-3;
  Nonlinearity kind = Nonlinearity::cubic;
  double sign = 1.0;  // cubic: +1 focusing, -1 defocusing
  double q = 2.5;
  bool include_critical = true;
  int snapshot_stride = 1;
  double blowup_amplitude = 1e6;

  void validate(int d) const;
};

struct TrajectorySeries {
  GridSpec grid;
  std::vector<double> times;
  std::vector<SpectralField> fields;
  bool blowup_suspect = false;

  double t0() const { return times.front(); }
  double t1() const { return times.back(); }
  double dt() const {
    return times.size() > 1 ? times[1] - times[0] : 0.0;
  }
  std::size_t size() const { return times.size(); }
  void check_uniform() const;
};

// Strang-split e^{itH} f; exact Fourier multiplier when V is zero. dt must
// divide t (up to rounding).
SpectralField linear_propagate(const SpectralField& f, double t,
                               const PotentialSpec& v, double dt);

// One Strang step of the linear flow (V pointwise phase halves around the
// exact Laplacian multiplier).
SpectralField linear_step(const SpectralField& f, const PotentialSpec& v,
                          double dt);

// Trajectory of the free (linear) flow sampled every snapshot_stride steps.
TrajectorySeries linear_trajectory(const SpectralField& f,
                                   const PotentialSpec& v, double horizon,
                                   double dt, int snapshot_stride = 1);

TrajectorySeries nls_evolve(const SpectralField& u0, const EvolveConfig& cfg,
                            const PotentialSpec& v, double horizon);

// Streaming variant: observer(t, u) is called at t = 0 and after every
// snapshot_stride steps; no trajectory is retained. Returns false when the
// run aborted on blowup suspicion.
bool nls_evolve_observe(const SpectralField& u0, const EvolveConfig& cfg,
                        const PotentialSpec& v, double horizon,
                        const std::function<void(double, const SpectralField&)>& observer);

double mass(const SpectralField& u);
double energy(const SpectralField& u, const EvolveConfig& cfg,
              const PotentialSpec& v);

}  // namespace nlslab
