#include "nlslab/picard.hpp"

#include <cmath>

namespace nlslab {

namespace {

// |w|^2 w pointwise for w = F + v.
std::vector<cplx> cubic_density(const std::vector<cplx>& f,
                                const std::vector<cplx>& v) {
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    cplx w = f[i] + v[i];
    out[i] = std::norm(w) * w;
  }
  return out;
}

bool finite(const std::vector<cplx>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

GateResult smallness_gate(const SpectralField& v0, const TrajectorySeries& F,
                          const PotentialSpec& pot, const PicardConfig& cfg,
                          const NormConfig& ncfg) {
  cfg.validate();
  GateResult gate;
  double v0_norm = l2_norm(v0);
  if (v0_norm > 0.0) {
    TrajectorySeries free_part =
        linear_trajectory(v0, pot, F.t1() - F.t0(), cfg.dt);
    gate.free_x = x_norm(free_part, ncfg).total;
  }
  gate.forcing_y = y_norm(F, ncfg).total;
  gate.passes = gate.free_x + gate.forcing_y <= cfg.delta;
  return gate;
}

PicardResult picard_solve(const SpectralField& v0, const TrajectorySeries& F,
                          const PotentialSpec& pot, const PicardConfig& cfg,
                          const NormConfig& ncfg) {
  cfg.validate();
  F.check_uniform();
  if (std::abs(F.t0()) > 1e-12)
    throw validation_error("picard: forcing must start at t = 0");
  const GridSpec& g = F.grid;
  const std::size_t n_times = F.size();
  const double dt = F.dt();
  const std::size_t n_pts = g.size();

  PicardResult res;
  res.gate = smallness_gate(v0, F, pot, cfg, ncfg);

  // Free evolution of v0 at the snapshot times; the contraction starts here.
  std::vector<std::vector<cplx>> v_free(n_times);
  {
    TrajectorySeries free_tr =
        linear_trajectory(v0, pot, F.t1(), dt);
    if (free_tr.size() != n_times)
      throw validation_error("picard: free trajectory cadence mismatch");
    for (std::size_t i = 0; i < n_times; ++i)
      v_free[i] = free_tr.fields[i].values();
  }

  std::vector<std::vector<cplx>> v_cur = v_free;
  std::vector<const std::vector<cplx>*> f_vals(n_times);
  for (std::size_t i = 0; i < n_times; ++i) f_vals[i] = &F.fields[i].values();

  auto apply_phi = [&](const std::vector<std::vector<cplx>>& v_in,
                       std::vector<std::vector<cplx>>& v_out) -> bool {
    // Duhamel by trapezoid with the semigroup recursion
    //   w_n = U_dt [ w_{n-1} + (dt/2) Nl_{n-1} ] + (dt/2) Nl_n.
    std::vector<cplx> w(n_pts, cplx(0.0, 0.0));
    std::vector<cplx> nl_prev = cubic_density(*f_vals[0], v_in[0]);
    v_out[0] = v_free[0];
    const cplx isign(0.0, cfg.sign);
    for (std::size_t nidx = 1; nidx < n_times; ++nidx) {
      std::vector<cplx> carry(n_pts);
      for (std::size_t i = 0; i < n_pts; ++i)
        carry[i] = w[i] + 0.5 * dt * nl_prev[i];
      SpectralField stepped = linear_step(
          SpectralField::from_values(g, std::move(carry)), pot, dt);
      const auto& sv = stepped.values();
      std::vector<cplx> nl_cur = cubic_density(*f_vals[nidx], v_in[nidx]);
      for (std::size_t i = 0; i < n_pts; ++i)
        w[i] = sv[i] + 0.5 * dt * nl_cur[i];
      v_out[nidx].resize(n_pts);
      for (std::size_t i = 0; i < n_pts; ++i)
        v_out[nidx][i] = v_free[nidx][i] + isign * w[i];
      if (!finite(v_out[nidx])) return false;
      nl_prev = std::move(nl_cur);
    }
    return true;
  };

  auto sup_h1_diff = [&](const std::vector<std::vector<cplx>>& a,
                         const std::vector<std::vector<cplx>>& b) {
    double sup = 0.0;
    for (std::size_t nidx = 0; nidx < n_times; ++nidx) {
      std::vector<cplx> diff(n_pts);
      for (std::size_t i = 0; i < n_pts; ++i) diff[i] = a[nidx][i] - b[nidx][i];
      sup = std::max(
          sup, sobolev_norm(SpectralField::from_values(g, std::move(diff)), 1.0));
    }
    return sup;
  };

  std::vector<std::vector<cplx>> v_next(n_times);
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (!apply_phi(v_cur, v_next)) {
      res.aborted_nan = true;
      break;
    }
    double inc = sup_h1_diff(v_next, v_cur);
    res.increments.push_back(inc);
    if (res.increments.size() >= 2) {
      double prev = res.increments[res.increments.size() - 2];
      if (prev > 0.0) res.contraction_factors.push_back(inc / prev);
    }
    v_cur.swap(v_next);
    if (inc < cfg.tol) {
      res.converged = true;
      break;
    }
  }

  // Residual ||Phi(v*) - v*|| at the reported solution.
  if (!res.aborted_nan) {
    if (apply_phi(v_cur, v_next))
      res.fixed_point_residual = sup_h1_diff(v_next, v_cur);
  }

  res.v.grid = g;
  res.u.grid = g;
  res.v.times = F.times;
  res.u.times = F.times;
  res.v.fields.resize(n_times);
  res.u.fields.resize(n_times);
  for (std::size_t nidx = 0; nidx < n_times; ++nidx) {
    std::vector<cplx> uv(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i)
      uv[i] = (*f_vals[nidx])[i] + v_cur[nidx][i];
    res.v.fields[nidx] = SpectralField::from_values(g, v_cur[nidx]);
    res.u.fields[nidx] = SpectralField::from_values(g, std::move(uv));
  }
  return res;
}

std::vector<ContinuationRow> continuation_scan(const SpectralField& f_omega,
                                               const PotentialSpec& pot,
                                               const PicardConfig& cfg,
                                               const NormConfig& ncfg,
                                               double t_max, double rel_tol) {
  cfg.validate();
  std::vector<ContinuationRow> rows;
  SpectralField zero = SpectralField::zero(f_omega.grid());

  auto probe = [&](double t_end) -> ContinuationRow {
    PicardConfig local = cfg;
    local.t_end = t_end;
    TrajectorySeries F = linear_trajectory(f_omega, pot, t_end, local.dt);
    PicardResult r = picard_solve(zero, F, pot, local, ncfg);
    ContinuationRow row;
    row.t_end = t_end;
    row.gate = r.gate;
    row.converged = r.converged;
    rows.push_back(row);
    return row;
  };

  // Zero data passes every interval; no bracketing possible.
  if (l2_norm(f_omega) == 0.0) {
    probe(cfg.t_end);
    probe(std::min(2.0 * cfg.t_end, t_max));
    return rows;
  }

  double lo = 0.0, hi = 0.0;
  double t = cfg.t_end;
  for (;;) {
    ContinuationRow row = probe(t);
    if (row.gate.passes) {
      lo = t;
      if (t >= t_max) return rows;  // gate passes everywhere probed
      t = std::min(2.0 * t, t_max);
    } else {
      hi = t;
      break;
    }
  }
  if (lo == 0.0) {
    // Failed on the first probe; bisect downward.
    lo = 0.0;
    hi = t;
  }
  for (int it = 0; it < 40 && (hi - lo) > rel_tol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    // Snap to the step grid so the trajectory lands exactly on mid.
    mid = std::max(cfg.dt, std::round(mid / cfg.dt) * cfg.dt);
    if (mid <= lo || mid >= hi) break;
    ContinuationRow row = probe(mid);
    (row.gate.passes ? lo : hi) = mid;
  }
  return rows;
}

}  // namespace nlslab
