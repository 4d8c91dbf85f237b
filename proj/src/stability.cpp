#include "nlslab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

// <u, u_a(. - y)>_{H^1} for every lattice shift y via one backward FFT of
// c_j = (1+|xi_j|^2) u_hat_j conj(ua_hat_j); |C| is the phase-optimal term.
std::vector<cplx> h1_correlation(const SpectralField& u,
                                 const SpectralField& ua) {
  const GridSpec& g = u.grid();
  const auto& mu = u.modes();
  const auto& ma = ua.modes();
  std::vector<cplx> c(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    c[i] = (1.0 + g.freq_norm_sq(i)) * mu[i] * std::conj(ma[i]);
  std::vector<cplx> corr(mu.size());
  fft::backward(g.dims(), c.data(), corr.data());
  for (auto& z : corr) z *= g.volume();
  return corr;
}

// Direct evaluation of the correlation at a fractional shift (cell units),
// using the true translation phase e^{i xi . y}; agrees with the FFT values
// at integer shifts.
double h1_correlation_at(const SpectralField& u, const SpectralField& ua,
                         const std::vector<double>& shift_cells) {
  const GridSpec& g = u.grid();
  const auto& mu = u.modes();
  const auto& ma = ua.modes();
  std::vector<int> ax(g.d);
  cplx acc(0.0, 0.0);
  const double dx = g.dx();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    g.unflatten(i, ax.data());
    double phase = 0.0;
    for (int a = 0; a < g.d; ++a)
      phase += g.axis_freq[ax[a]] * shift_cells[a] * dx;
    acc += (1.0 + g.freq_norm_sq(i)) * mu[i] * std::conj(ma[i]) *
           cplx(std::cos(phase), std::sin(phase));
  }
  return std::abs(acc) * g.volume();
}

}  // namespace

double orbit_distance(const SpectralField& u, const SpectralField& ua) {
  const GridSpec& g = u.grid();
  if (!(g == ua.grid()))
    throw validation_error("orbit_distance: grids must match");
  double nu = sobolev_norm(u, 1.0);
  double na = sobolev_norm(ua, 1.0);
  auto corr = h1_correlation(u, ua);

  std::size_t best = 0;
  double best_abs = 0.0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    double a = std::abs(corr[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }

  // Quadratic refinement per axis around the best lattice shift.
  std::vector<int> ax(g.d);
  g.unflatten(best, ax.data());
  std::vector<double> shift(g.d);
  for (int a = 0; a < g.d; ++a) shift[a] = ax[a];
  for (int a = 0; a < g.d; ++a) {
    auto at = [&](int delta) {
      std::vector<int> p(ax.begin(), ax.end());
      p[a] = ((ax[a] + delta) % g.m + g.m) % g.m;
      return std::abs(corr[g.flatten(p.data())]);
    };
    double lo = at(-1), mid = at(0), hi = at(+1);
    double denom = lo - 2.0 * mid + hi;
    if (denom < 0.0) {
      double off = 0.5 * (lo - hi) / denom;
      if (std::abs(off) < 1.0) shift[a] += off;
    }
  }
  double refined = h1_correlation_at(u, ua, shift);
  double inner = std::max(best_abs, refined);

  double dist_sq = nu * nu + na * na - 2.0 * inner;
  return std::sqrt(std::max(dist_sq, 0.0));
}

SpectralField make_perturbation(const GridSpec& g, const PerturbationSpec& pert) {
  pert.validate();
  if (pert.kind == PerturbationSpec::Kind::deterministic_h1) {
    // Band-limited complex Gaussian direction, zero mean, scaled in H^1.
    std::vector<cplx> modes(g.size(), cplx(0.0, 0.0));
    const double cap = 0.5 * g.max_axis_freq();
    std::vector<int> ax(g.d);
    for (std::size_t i = 1; i < modes.size(); ++i) {
      g.unflatten(i, ax.data());
      bool skip = false;
      for (int a = 0; a < g.d; ++a)
        if (g.is_nyquist_index(ax[a])) skip = true;
      if (skip) continue;
      double absxi = std::sqrt(g.freq_norm_sq(i));
      if (absxi > cap) continue;
      modes[i] = rng::unit_complex_gaussian(pert.seed, i) /
                 (1.0 + g.freq_norm_sq(i));
    }
    SpectralField f = SpectralField::from_modes(g, std::move(modes));
    double h1 = sobolev_norm(f, 1.0);
    return scale(f, pert.size / h1);
  }
  // Rough profile with H^s-critical mode decay, Wiener-randomized, scaled
  // to the requested H^s size.
  std::vector<cplx> modes(g.size(), cplx(0.0, 0.0));
  std::vector<int> ax(g.d);
  for (std::size_t i = 1; i < modes.size(); ++i) {
    g.unflatten(i, ax.data());
    bool skip = false;
    for (int a = 0; a < g.d; ++a)
      if (g.is_nyquist_index(ax[a])) skip = true;
    if (skip) continue;
    double wsq = 1.0 + g.freq_norm_sq(i);
    modes[i] = std::pow(wsq, -0.5 * (pert.s + 0.5 * g.d + 0.1));
  }
  SpectralField profile = SpectralField::from_modes(g, std::move(modes));
  RandomSeedPlan plan{pert.seed, false};
  SpectralField rough = randomize(profile, plan);
  double hs = sobolev_norm(rough, pert.s);
  return scale(rough, pert.size / hs);
}

double StabilityTrace::max_dist() const {
  double mx = 0.0;
  for (double d : orbit_dist) mx = std::max(mx, d);
  return mx;
}

StabilityTrace stability_experiment(const GroundStateResult& gs,
                                    const PerturbationSpec& pert,
                                    double horizon, const EvolveConfig& cfg,
                                    const PotentialSpec& v,
                                    const StabilityOptions& opts) {
  if (!gs.converged)
    throw validation_error("stability: ground state did not converge");
  const SpectralField& ua = gs.u_a;
  SpectralField phi = make_perturbation(ua.grid(), pert);
  SpectralField u0 = add(ua, phi);

  StabilityTrace trace;
  trace.epsilon_budget = opts.budget_factor * pert.size;
  trace.pert_h1 = sobolev_norm(phi, 1.0);
  trace.pert_hs =
      pert.kind == PerturbationSpec::Kind::random_rough
          ? sobolev_norm(phi, pert.s)
          : trace.pert_h1;

  EvolveConfig run = cfg;
  long steps = std::lround(horizon / cfg.dt);
  int stride = opts.sample_stride > 0
                   ? opts.sample_stride
                   : std::max(1L, steps / 100);
  run.snapshot_stride = stride;

  double mass0 = mass(u0);
  double energy0 = energy(u0, run, v);
  bool ok = nls_evolve_observe(
      u0, run, v, horizon, [&](double t, const SpectralField& u) {
        trace.times.push_back(t);
        trace.orbit_dist.push_back(orbit_distance(u, ua));
        trace.mass_drift.push_back(std::abs(mass(u) - mass0) /
                                   std::max(mass0, 1e-300));
        trace.energy_drift.push_back(std::abs(energy(u, run, v) - energy0) /
                                     std::max(std::abs(energy0), 1e-300));
      });
  trace.aborted = !ok;

  trace.stayed_within = !trace.aborted;
  for (std::size_t i = 0; i < trace.orbit_dist.size(); ++i) {
    if (trace.orbit_dist[i] > trace.epsilon_budget) {
      trace.stayed_within = false;
      trace.t_exit = trace.times[i];
      break;
    }
  }
  return trace;
}

AlmostSureSummary almost_sure_stability_experiment(
    const GroundStateResult& gs, double s, double delta, int n_samples,
    double horizon, const EvolveConfig& cfg, const PotentialSpec& v,
    uint64_t seed, const StabilityOptions& opts) {
  AlmostSureSummary summary;
  summary.traces.resize(n_samples);
  parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
    PerturbationSpec pert;
    pert.kind = PerturbationSpec::Kind::random_rough;
    pert.s = s;
    pert.size = delta;
    pert.seed = rng::derive(seed, static_cast<uint64_t>(i));
    summary.traces[i] = stability_experiment(gs, pert, horizon, cfg, v, opts);
  });
  int within = 0;
  for (const auto& t : summary.traces)
    if (t.stayed_within) ++within;
  const double n = n_samples, p = within / n, z = 1.959963984540054;
  summary.fraction_within = p;
  double denom = 1.0 + z * z / n;
  double center = (p + z * z / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  summary.wilson_lo = std::max(0.0, center - half);
  summary.wilson_hi = std::min(1.0, center + half);
  return summary;
}

PerturbationCompareResult perturbation_compare(const SpectralField& u0,
                                               const TrajectorySeries& F,
                                               const PotentialSpec& v,
                                               const PicardConfig& cfg,
                                               const NormConfig& ncfg) {
  PerturbationCompareResult out;
  PicardResult forced = picard_solve(u0, F, v, cfg, ncfg);
  out.forced_converged = forced.converged;
  out.forcing_y = forced.gate.forcing_y;

  EvolveConfig ecfg;
  ecfg.dt = cfg.dt;
  ecfg.kind = Nonlinearity::cubic;
  ecfg.sign = cfg.sign;
  ecfg.snapshot_stride = 1;
  TrajectorySeries unforced = nls_evolve(u0, ecfg, v, F.t1());
  if (unforced.size() != forced.v.size())
    throw numeric_error("perturbation_compare: cadence mismatch");

  TrajectorySeries diff;
  diff.grid = F.grid;
  diff.times = F.times;
  diff.fields.resize(F.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    diff.fields[i] = sub(forced.v.fields[i], unforced.fields[i]);
    sup = std::max(sup, sobolev_norm(diff.fields[i], 1.0));
  }
  out.sup_h1_diff = sup;
  out.x_norm_diff = x_norm(diff, ncfg).total;
  return out;
}

}  // namespace nlslab
