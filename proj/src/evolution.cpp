#include "nlslab/evolution.hpp"

#include <cmath>

#include "nlslab/fft.hpp"

namespace nlslab {

void EvolveConfig::validate(int d) const {
  if (!(dt > 0.0)) throw validation_error("evolve: dt must be > 0");
  if (kind == Nonlinearity::mixed) {
    if (d < 3 && include_critical)
      throw validation_error("evolve: critical term requires d >= 3");
    if (!(q > 2.0 && q < 2.0 + 4.0 / d))
      throw validation_error("evolve: q must lie in (2, 2 + 4/d)");
  }
}

void TrajectorySeries::check_uniform() const {
  if (times.size() < 2) return;
  const double step = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    double expected = times[0] + step * static_cast<double>(i);
    if (std::abs(times[i] - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
      throw validation_error("trajectory: non-uniform snapshot times");
  }
}

namespace {

struct Stepper {
  const GridSpec& g;
  std::vector<double> kinetic_phase;  // -|xi|^2, Nyquist rows zeroed
  const std::vector<double>* pot = nullptr;
  bool has_potential = false;

  Stepper(const GridSpec& grid, const PotentialSpec& v) : g(grid) {
    kinetic_phase.resize(g.size());
    std::vector<int> ax(g.d);
    for (std::size_t i = 0; i < kinetic_phase.size(); ++i) {
      g.unflatten(i, ax.data());
      double w = 0.0;
      for (int a = 0; a < g.d; ++a) {
        if (g.is_nyquist_index(ax[a])) continue;
        double xi = g.axis_freq[ax[a]];
        w += xi * xi;
      }
      kinetic_phase[i] = -w;
    }
    has_potential = !v.is_zero();
    pot = &v.samples();
  }

  // u <- exp(i dt Delta) u in place (mode space round trip).
  void kinetic(std::vector<cplx>& u, double dt) const {
    std::vector<cplx> hat(u.size());
    fft::forward(g.dims(), u.data(), hat.data());
    for (std::size_t i = 0; i < hat.size(); ++i) {
      double ph = kinetic_phase[i] * dt;
      hat[i] *= cplx(std::cos(ph), std::sin(ph));
    }
    fft::backward(g.dims(), hat.data(), u.data());
    const double inv_n = 1.0 / static_cast<double>(u.size());
    for (auto& z : u) z *= inv_n;
  }

  // u <- exp(-i dt V) u (pointwise, exact).
  void potential_phase(std::vector<cplx>& u, double dt) const {
    if (!has_potential) return;
    for (std::size_t i = 0; i < u.size(); ++i) {
      double ph = -(*pot)[i] * dt;
      u[i] *= cplx(std::cos(ph), std::sin(ph));
    }
  }

  // One Strang step of the linear flow e^{i dt H}, H = Delta - V.
  void linear_strang(std::vector<cplx>& u, double dt) const {
    potential_phase(u, 0.5 * dt);
    kinetic(u, dt);
    potential_phase(u, 0.5 * dt);
  }
};

double nonlinear_rate(const EvolveConfig& cfg, double amp_sq, int d) {
  if (cfg.kind == Nonlinearity::cubic) return cfg.sign * amp_sq;
  double amp = std::sqrt(amp_sq);
  double rate = std::pow(amp, cfg.q - 2.0);
  if (cfg.include_critical) {
    double crit = 2.0 * d / (d - 2.0);
    rate += std::pow(amp, crit - 2.0);
  }
  return rate;
}

// u <- exp(i dt (N(|u|^2) - V)) u; modulus preserving.
void phase_step(std::vector<cplx>& u, const EvolveConfig& cfg,
                const Stepper& st, double dt, int d) {
  const bool pot = st.has_potential;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double ph = nonlinear_rate(cfg, std::norm(u[i]), d) * dt;
    if (pot) ph -= (*st.pot)[i] * dt;
    u[i] *= cplx(std::cos(ph), std::sin(ph));
  }
}

bool amplitude_ok(const std::vector<cplx>& u, double cap) {
  for (const auto& z : u) {
    double a = std::abs(z);
    if (!std::isfinite(a) || a > cap) return false;
  }
  return true;
}

}  // namespace

SpectralField linear_step(const SpectralField& f, const PotentialSpec& v,
                          double dt) {
  Stepper st(f.grid(), v);
  std::vector<cplx> u = f.values();
  st.linear_strang(u, dt);
  return SpectralField::from_values(f.grid(), std::move(u));
}

SpectralField linear_propagate(const SpectralField& f, double t,
                               const PotentialSpec& v, double dt) {
  if (!(dt > 0.0)) throw validation_error("linear_propagate: dt must be > 0");
  const GridSpec& g = f.grid();
  if (t == 0.0) return f;
  if (v.is_zero()) {
    // Exact diagonal flow.
    Stepper st(g, v);
    const auto& mo = f.modes();
    std::vector<cplx> out(mo.size());
    for (std::size_t i = 0; i < mo.size(); ++i) {
      double ph = st.kinetic_phase[i] * t;
      out[i] = mo[i] * cplx(std::cos(ph), std::sin(ph));
    }
    return SpectralField::from_modes(g, std::move(out));
  }
  double steps_real = std::abs(t) / dt;
  long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - steps) > 1e-9 * std::max(1.0, steps_real))
    throw validation_error("linear_propagate: dt must divide t");
  const double h = t / static_cast<double>(steps);
  Stepper st(g, v);
  std::vector<cplx> u = f.values();
  for (long s = 0; s < steps; ++s) st.linear_strang(u, h);
  return SpectralField::from_values(g, std::move(u));
}

TrajectorySeries linear_trajectory(const SpectralField& f,
                                   const PotentialSpec& v, double horizon,
                                   double dt, int snapshot_stride) {
  if (!(dt > 0.0)) throw validation_error("linear_trajectory: dt must be > 0");
  long steps = std::lround(horizon / dt);
  if (steps < 1) throw validation_error("linear_trajectory: empty horizon");
  Stepper st(f.grid(), v);
  TrajectorySeries tr;
  tr.grid = f.grid();
  std::vector<cplx> u = f.values();
  tr.times.push_back(0.0);
  tr.fields.push_back(f);
  for (long s = 1; s <= steps; ++s) {
    st.linear_strang(u, dt);
    if (s % snapshot_stride == 0 || s == steps) {
      tr.times.push_back(dt * static_cast<double>(s));
      tr.fields.push_back(SpectralField::from_values(f.grid(), u));
    }
  }
  return tr;
}

bool nls_evolve_observe(const SpectralField& u0, const EvolveConfig& cfg,
                        const PotentialSpec& v, double horizon,
                        const std::function<void(double, const SpectralField&)>& observer) {
  cfg.validate(u0.grid().d);
  const GridSpec& g = u0.grid();
  long steps = std::lround(std::abs(horizon) / cfg.dt);
  if (steps < 1) throw validation_error("nls_evolve: empty horizon");
  const double h = horizon / static_cast<double>(steps);
  Stepper st(g, v);
  std::vector<cplx> u = u0.values();
  observer(0.0, u0);
  for (long s = 1; s <= steps; ++s) {
    phase_step(u, cfg, st, 0.5 * h, g.d);
    st.kinetic(u, h);
    phase_step(u, cfg, st, 0.5 * h, g.d);
    if (!amplitude_ok(u, cfg.blowup_amplitude)) return false;
    if (s % cfg.snapshot_stride == 0 || s == steps)
      observer(h * static_cast<double>(s), SpectralField::from_values(g, u));
  }
  return true;
}

TrajectorySeries nls_evolve(const SpectralField& u0, const EvolveConfig& cfg,
                            const PotentialSpec& v, double horizon) {
  TrajectorySeries tr;
  tr.grid = u0.grid();
  bool ok = nls_evolve_observe(u0, cfg, v, horizon,
                               [&tr](double t, const SpectralField& u) {
                                 tr.times.push_back(t);
                                 tr.fields.push_back(u);
                               });
  tr.blowup_suspect = !ok;
  return tr;
}

double mass(const SpectralField& u) {
  double n = l2_norm(u);
  return n * n;
}

double energy(const SpectralField& u, const EvolveConfig& cfg,
              const PotentialSpec& v) {
  const GridSpec& g = u.grid();
  double e = 0.5 * grad_l2_sq(u);
  if (!v.is_zero()) {
    const auto& val = u.values();
    const auto& pot = v.samples();
    double s = 0.0;
    for (std::size_t i = 0; i < val.size(); ++i) s += pot[i] * std::norm(val[i]);
    e += 0.5 * s * g.cell_volume();
  }
  if (cfg.kind == Nonlinearity::cubic) {
    double l4 = lebesgue_norm(u, 4.0);
    e -= cfg.sign * 0.25 * std::pow(l4, 4.0);
  } else {
    double lq = lebesgue_norm(u, cfg.q);
    e -= std::pow(lq, cfg.q) / cfg.q;
    if (cfg.include_critical) {
      double crit = 2.0 * g.d / (g.d - 2.0);
      double lc = lebesgue_norm(u, crit);
      e -= std::pow(lc, crit) / crit;
    }
  }
  return e;
}

}  // namespace nlslab
