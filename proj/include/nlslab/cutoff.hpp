#pragma once

#include <cmath>

namespace nlslab {

// Smooth cutoff profiles shared by all frequency projections.
//
//   varphi: radial C-infinity step, = 1 for |xi| <= 1, = 0 for |xi| >= 2,
//           monotone in between. Annulus multiplier for the dyadic
//           projections is varphi(|xi|/N) - varphi(2|xi|/N).
//   psi:    even radial bump for the unit-scale projections. Its support
//           radius exceeds sqrt(d)/2 so that every frequency is covered by
//           some integer translate; the family is normalized on the lattice
//           by dividing by sum_k psi(xi - k).
//   phi_dir: one-dimensional bump, identically 1 on [1/4, 2] and supported
//           in (1/8, 4). Since max_l |xi.e_l| >= |xi|/sqrt(d) and d <= 4,
//           every xi in the annulus N/2 < |xi| <= 2N has some axis with
//           multiplier exactly 1, which makes the composition identity
//           (1-P_{N,e_1})...(1-P_{N,e_d}) P_N = 0 hold on the lattice.
struct CutoffProfile {
  // exp(-1/t) glue, C-infinity at 0.
  static double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

  // 0 for t <= 0, 1 for t >= 1, smooth monotone in between.
  static double step01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = glue(t), b = glue(1.0 - t);
    return a / (a + b);
  }

  static double varphi(double rho) { return step01(2.0 - std::abs(rho)); }

  // Must exceed the deep-hole distance sqrt(d)/2 of Z^d so the lattice sum
  // is positive everywhere. For d <= 3 the unit radius works and keeps the
  // translates at integer distance exactly zero; d = 4 needs more (the deep
  // holes sit at distance exactly 1).
  static double psi_support_radius(int d) { return d <= 3 ? 1.0 : 1.5; }

  // Unnormalized bump; radial, positive on |x| < radius, 0 outside.
  static double psi_raw(double dist, int d) {
    double r = psi_support_radius(d);
    double t = dist / r;
    if (t >= 1.0) return 0.0;
    return std::exp(-t * t / (1.0 - t * t));
  }

  static double phi_dir(double t) {
    t = std::abs(t);
    return step01((t - 0.125) / 0.115) * step01((4.0 - t) / 1.9);
  }
};

}  // namespace nlslab
