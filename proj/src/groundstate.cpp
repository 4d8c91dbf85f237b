#include "nlslab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlslab/cutoff.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/rng.hpp"

namespace nlslab {

namespace {

std::vector<double> radius_table(const GridSpec& g) {
  std::vector<double> r(g.size());
  std::vector<int> ax(g.d);
  for (std::size_t i = 0; i < r.size(); ++i) {
    g.unflatten(i, ax.data());
    double s = 0.0;
    for (int a = 0; a < g.d; ++a) {
      double x = g.axis_coord(ax[a]);
      s += x * x;
    }
    r[i] = std::sqrt(s);
  }
  return r;
}

SpectralField real_field(const GridSpec& g, const std::vector<double>& v) {
  std::vector<cplx> z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) z[i] = cplx(v[i], 0.0);
  return SpectralField::from_values(g, std::move(z));
}

// -Delta u as a real array (Nyquist rows zeroed, consistent with gradient).
std::vector<double> neg_laplacian(const SpectralField& u) {
  const GridSpec& g = u.grid();
  const auto& mo = u.modes();
  std::vector<cplx> hat(mo.size());
  std::vector<int> ax(g.d);
  for (std::size_t i = 0; i < mo.size(); ++i) {
    g.unflatten(i, ax.data());
    double w = 0.0;
    for (int a = 0; a < g.d; ++a) {
      if (g.is_nyquist_index(ax[a])) continue;
      double xi = g.axis_freq[ax[a]];
      w += xi * xi;
    }
    hat[i] = w * mo[i];
  }
  SpectralField out = SpectralField::from_modes(g, std::move(hat));
  const auto& val = out.values();
  std::vector<double> res(val.size());
  for (std::size_t i = 0; i < val.size(); ++i) res[i] = val[i].real();
  return res;
}

std::vector<double> h1_precondition(const GridSpec& g,
                                    const std::vector<double>& v) {
  std::vector<cplx> z(v.size()), hat(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) z[i] = cplx(v[i], 0.0);
  fft::forward(g.dims(), z.data(), hat.data());
  for (std::size_t i = 0; i < hat.size(); ++i)
    hat[i] /= (1.0 + g.freq_norm_sq(i));
  fft::backward(g.dims(), hat.data(), z.data());
  std::vector<double> out(v.size());
  const double inv_n = 1.0 / static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = z[i].real() * inv_n;
  return out;
}

double dot(const GridSpec& g, const std::vector<double>& a,
           const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * g.cell_volume();
}

}  // namespace

GnEstimate gn_quotient_maximize(int d, double q, const GridSpec& grid,
                                int max_iter) {
  if (!(q >= 2.0 && (d <= 2 || q < 2.0 * d / (d - 2.0))))
    throw validation_error("gn estimate: q out of range");
  GnEstimate est;
  if (q == 2.0) {  // beta = 0: identity inequality
    est.raw = 1.0;
    est.inflated = 1.0;
    return est;
  }
  const double beta = d * (0.5 - 1.0 / q);
  const GridSpec& g = grid;
  auto radius = radius_table(g);

  std::vector<double> u(g.size());
  const double w0 = g.half_len / 6.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = std::exp(-radius[i] * radius[i] / (2.0 * w0 * w0));

  auto quotient = [&](const std::vector<double>& v) {
    SpectralField f = real_field(g, v);
    double lq = lebesgue_norm(f, q);
    double l2 = l2_norm(f);
    double gr = std::sqrt(grad_l2_sq(f));
    if (gr == 0.0 || l2 == 0.0) return 0.0;
    return lq / (std::pow(gr, beta) * std::pow(l2, 1.0 - beta));
  };

  double best = quotient(u);
  double tau = 0.5;
  int stall = 0;
  for (int it = 0; it < max_iter; ++it) {
    SpectralField f = real_field(g, u);
    double lq = lebesgue_norm(f, q);
    double l2sq = std::pow(l2_norm(f), 2.0);
    double grsq = grad_l2_sq(f);
    if (!(lq > 0.0) || !(grsq > 0.0)) break;
    auto lap = neg_laplacian(f);  // -Delta u
    std::vector<double> grad(u.size());
    const double lqq = std::pow(lq, q);
    for (std::size_t i = 0; i < u.size(); ++i) {
      double uq = std::pow(std::abs(u[i]), q - 2.0) * u[i];
      grad[i] = uq / lqq - beta * lap[i] / grsq - (1.0 - beta) * u[i] / l2sq;
    }
    auto pg = h1_precondition(g, grad);
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      std::vector<double> trial(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + tau * pg[i];
      double qt = quotient(trial);
      if (qt > best) {
        // renormalize to unit L2 to keep amplitudes in range
        double tn = l2_norm(real_field(g, trial));
        for (auto& x : trial) x /= tn;
        u = std::move(trial);
        best = qt;
        accepted = true;
        tau *= 1.3;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      if (++stall >= 2) break;
    } else {
      stall = 0;
    }
    est.iterations = it + 1;
    if (!std::isfinite(best)) {
      est.diverged = true;
      break;
    }
  }
  est.raw = best;
  est.inflated = kGnSafetyFactor * best;
  return est;
}

double gn_constant_estimate(int d, double q, const GridSpec& grid) {
  return gn_quotient_maximize(d, q, grid).inflated;
}

SobolevEstimate sobolev_constant_sweep(int d, const GridSpec& grid) {
  if (d < 3) throw validation_error("sobolev estimate: requires d >= 3");
  const GridSpec& g = grid;
  const double crit = 2.0 * d / (d - 2.0);
  auto radius = radius_table(g);
  const double L = g.half_len;

  SobolevEstimate best;
  best.value = std::numeric_limits<double>::infinity();
  // sigma at fixed fractions of the box so the sweep commutes with dilation.
  const int n_sweep = 25;
  const double s_lo = std::log(6.0 / g.m), s_hi = std::log(1.0 / 3.0);
  for (int j = 0; j < n_sweep; ++j) {
    double sigma = L * std::exp(s_lo + (s_hi - s_lo) * j / (n_sweep - 1.0));
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      double window = CutoffProfile::step01((0.85 - radius[i] / L) / 0.15);
      double rr = radius[i] / sigma;
      u[i] = window * std::pow(1.0 + rr * rr, -(d - 2.0) / 2.0);
    }
    SpectralField f = real_field(g, u);
    double denom = std::pow(lebesgue_norm(f, crit), 2.0);
    if (!(denom > 0.0)) continue;
    double val = grad_l2_sq(f) / denom;
    if (val < best.value) {
      best.value = val;
      best.best_sigma = sigma;
    }
  }
  return best;
}

double sobolev_constant_estimate(int d, const GridSpec& grid) {
  return sobolev_constant_sweep(d, grid).value;
}

double f_aux(double a, double rho, const InequalityConstants& c, double vneg) {
  if (!(a > 0.0 && rho > 0.0))
    throw validation_error("f_aux: a and rho must be positive");
  const double d = c.d, q = c.q, S = c.sobolev_S, C = c.gn_C;
  const double crit = c.crit();
  double head = 0.5 * (1.0 - vneg / S);
  double mid = std::pow(C, q) / q * std::pow(a, (2.0 * q - d * (q - 2.0)) / 4.0) *
               std::pow(rho, (d * (q - 2.0) - 4.0) / 4.0);
  double tail = std::pow(rho, (crit - 2.0) / 2.0) /
                (crit * std::pow(S, crit / 2.0));
  return head - mid - tail;
}

double rho_max(double a, const InequalityConstants& c) {
  const double d = c.d, q = c.q, S = c.sobolev_S, C = c.gn_C;
  const double crit = c.crit();
  double bracket = d * (4.0 - d * (q - 2.0)) * std::pow(C, q) *
                   std::pow(S, crit / 2.0) / (4.0 * q);
  double expo = 4.0 / (2.0 * crit - d * (q - 2.0));
  double a_expo = (2.0 * q - d * (q - 2.0)) / (2.0 * crit - d * (q - 2.0));
  return std::pow(bracket, expo) * std::pow(a, a_expo);
}

std::pair<double, double> a_zero(const InequalityConstants& c, double vneg) {
  const double d = c.d, q = c.q, S = c.sobolev_S, C = c.gn_C;
  const double crit = c.crit();
  double bracket = d * (4.0 - d * (q - 2.0)) * std::pow(C, q) *
                   std::pow(S, crit / 2.0) / (4.0 * q);
  double denom = 2.0 * crit - d * (q - 2.0);
  double K = std::pow(C, q) / q *
                 std::pow(bracket, (d * (q - 2.0) - 4.0) / denom) +
             std::pow(bracket, 2.0 * (crit - 2.0) / denom) /
                 (crit * std::pow(S, crit / 2.0));
  double head = 0.5 * (1.0 - vneg / S);
  double a0 = head > 0.0 ? std::pow(head / (2.0 * K), d / 2.0) : 0.0;
  return {K, a0};
}

GroundStateConstants groundstate_constants(const InequalityConstants& c,
                                           double vneg_lhalf) {
  GroundStateConstants gsc;
  gsc.ineq = c;
  gsc.vneg_lhalf = vneg_lhalf;
  gsc.headroom = 0.5 * (1.0 - vneg_lhalf / c.sobolev_S);
  auto [K, a0] = a_zero(c, vneg_lhalf);
  gsc.K = K;
  gsc.a0 = a0;
  gsc.rho0 = a0 > 0.0 ? rho_max(a0, c) : 0.0;
  return gsc;
}

double variational_energy(const SpectralField& u, const InequalityConstants& c,
                          const PotentialSpec& v) {
  EvolveConfig cfg;
  cfg.kind = Nonlinearity::mixed;
  cfg.q = c.q;
  cfg.include_critical = true;
  return energy(u, cfg, v);
}

GroundStateResult minimize_local(double a, const GroundStateConstants& gsc,
                                 const PotentialSpec& v, const GridSpec& grid,
                                 const OptimizerSettings& opts) {
  if (!(a > 0.0 && a < gsc.a0))
    throw validation_error("minimize_local: need 0 < a < a0");
  const GridSpec& g = grid;
  const InequalityConstants& c = gsc.ineq;
  const double crit = c.crit();
  const double rho0 = gsc.rho0;
  auto radius = radius_table(g);

  // Real radial decreasing seed on the mass sphere, widened into B_rho0.
  double width = opts.seed_width > 0.0 ? opts.seed_width : g.half_len / 4.0;
  auto make_seed = [&](double w) {
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      u[i] = std::exp(-radius[i] * radius[i] / (2.0 * w * w));
    SpectralField f = real_field(g, u);
    double nrm = l2_norm(f);
    for (auto& x : u) x *= std::sqrt(a) / nrm;
    return u;
  };
  std::vector<double> u = make_seed(width);
  for (int widen = 0; widen < 12; ++widen) {
    if (grad_l2_sq(real_field(g, u)) < 0.9 * rho0) break;
    width *= 1.4;
    u = make_seed(width);
  }

  auto energy_of = [&](const std::vector<double>& w) {
    return variational_energy(real_field(g, w), c, v);
  };
  // L2 gradient of I at real u: -Delta u + V u - |u|^{q-2}u - |u|^{2*-2}u.
  auto gradient_of = [&](const SpectralField& f, const std::vector<double>& w) {
    auto lap = neg_laplacian(f);
    const auto& pot = v.samples();
    std::vector<double> grad(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      double au = std::abs(w[i]);
      double nl = std::pow(au, c.q - 2.0) * w[i] +
                  std::pow(au, crit - 2.0) * w[i];
      grad[i] = lap[i] + pot[i] * w[i] - nl;
    }
    return grad;
  };

  GroundStateResult res;
  double tau = opts.tau0;
  double e_cur = energy_of(u);
  res.energy_log.push_back(e_cur);

  std::vector<double> u_prev, pg_prev;
  for (int it = 0; it < opts.max_iter; ++it) {
    SpectralField f = real_field(g, u);
    auto grad = gradient_of(f, u);

    // Multiplier and stationarity residual.
    double usq = dot(g, u, u);
    double lambda = dot(g, grad, u) / usq;
    double res_sq = 0.0;
    {
      std::vector<double> r(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) r[i] = grad[i] - lambda * u[i];
      res_sq = dot(g, r, r);
    }
    double h1 = sobolev_norm(f, 1.0);
    res.residual = std::sqrt(res_sq) / h1;
    res.lambda = lambda;
    res.grad_norm_sq = grad_l2_sq(f);
    res.iterations = it;
    if (res.residual <= opts.tol) {
      res.converged = true;
      break;
    }

    // Riemannian descent direction in the H^1-preconditioned metric:
    // M^{-1}(grad - lam_M u) with lam_M chosen so the direction is
    // L2-orthogonal to u; this keeps dI/dtau < 0 away from stationarity.
    auto pg = h1_precondition(g, grad);
    auto pu = h1_precondition(g, u);
    double lam_m = dot(g, pg, u) / dot(g, pu, u);
    for (std::size_t i = 0; i < u.size(); ++i) pg[i] -= lam_m * pu[i];

    // Barzilai-Borwein proposal with monotone backtracking.
    if (!u_prev.empty()) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        double du = u[i] - u_prev[i];
        double dg = pg[i] - pg_prev[i];
        num += du * du;
        den += du * dg;
      }
      if (den > 0.0) tau = std::clamp(num / den, 1e-4, 20.0);
    }
    u_prev = u;
    pg_prev = pg;

    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::vector<double> trial(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - tau * pg[i];
      SpectralField tf = real_field(g, trial);
      double nrm = l2_norm(tf);
      if (!(nrm > 0.0)) { tau *= 0.5; continue; }
      double sc = std::sqrt(a) / nrm;
      for (auto& x : trial) x *= sc;
      SpectralField tf2 = real_field(g, trial);
      double e_trial = energy_of(trial);
      if (e_trial <= e_cur && grad_l2_sq(tf2) < rho0) {
        u = std::move(trial);
        e_cur = e_trial;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    res.energy_log.push_back(e_cur);
    if (!accepted) {
      res.boundary_stall = grad_l2_sq(real_field(g, u)) > 0.9 * rho0;
      break;
    }
  }

  res.u_a = real_field(g, u);
  res.m_a = e_cur;
  return res;
}

std::vector<McurvePoint> m_curve(const std::vector<double>& a_list,
                                 const GroundStateConstants& gsc,
                                 const PotentialSpec& v, const GridSpec& grid,
                                 const OptimizerSettings& opts) {
  std::vector<McurvePoint> out(a_list.size());
  const double base_width =
      opts.seed_width > 0.0 ? opts.seed_width : grid.half_len / 4.0;
  const double factors[3] = {0.7, 1.0, 1.45};
  parallel_for(a_list.size(), [&](std::size_t idx) {
    McurvePoint pt;
    pt.a = a_list[idx];
    double best = std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    for (double fac : factors) {
      OptimizerSettings local = opts;
      local.seed_width = base_width * fac;
      GroundStateResult r = minimize_local(pt.a, gsc, v, grid, local);
      if (!r.converged) continue;
      worst = std::max(worst, r.m_a);
      if (r.m_a < best) {
        best = r.m_a;
        pt.m = r.m_a;
        pt.lambda = r.lambda;
        pt.grad_norm_sq = r.grad_norm_sq;
        pt.converged = true;
      }
    }
    if (pt.converged && std::isfinite(worst)) pt.multistart_spread = worst - best;
    out[idx] = pt;
  });
  return out;
}

}  // namespace nlslab
