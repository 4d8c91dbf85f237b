#include "nlslab/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlslab {

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    double h = times[i + 1] - times[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double angle_bracket(double n) { return std::sqrt(1.0 + n * n); }

// |grad h| pointwise (Euclidean over axes of complex partials).
std::vector<double> gradient_magnitude(const SpectralField& f) {
  auto g = gradient(f);
  std::vector<double> out(f.values().size(), 0.0);
  for (const auto& comp : g) {
    const auto& v = comp.values();
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += std::norm(v[i]);
  }
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

}  // namespace

double mixed_strichartz_norm(const TrajectorySeries& tr, double q, double r) {
  if (tr.size() < 2)
    throw validation_error("strichartz norm: need at least 2 snapshots");
  std::vector<double> space(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i)
    space[i] = lebesgue_norm(tr.fields[i], r);
  if (std::isinf(q)) return *std::max_element(space.begin(), space.end());
  auto w = trapezoid_weights(tr.times);
  double mx = *std::max_element(space.begin(), space.end());
  if (mx == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i)
    acc += w[i] * std::pow(space[i] / mx, q);
  return mx * std::pow(acc, 1.0 / q);
}

double lateral_norm(const TrajectorySeries& tr, double p, double q, int ell,
                    bool with_gradient, double exponent_cap, bool* surrogate) {
  const GridSpec& g = tr.grid;
  if (ell < 1 || ell > g.d)
    throw validation_error("lateral_norm: axis out of range");
  if (tr.size() < 2)
    throw validation_error("lateral_norm: need at least 2 snapshots");
  const int axis = ell - 1;
  const bool q_sup = q > exponent_cap || std::isinf(q);
  const bool p_sup = p > exponent_cap || std::isinf(p);
  if (surrogate) *surrogate = q_sup || p_sup;

  std::size_t stride_below = 1;
  for (int a = axis + 1; a < g.d; ++a) stride_below *= g.m;

  // inner_pow[slab] accumulates the (t, x') integral of the q-th power;
  // inner_sup[slab] tracks the sup used by the capped surrogate.
  std::vector<double> inner_pow(g.m, 0.0), inner_sup(g.m, 0.0);
  auto weights = trapezoid_weights(tr.times);
  const double dxprime = std::pow(g.dx(), g.d - 1);

  // Global scale guard for large finite exponents.
  double global_max = 0.0;
  std::vector<std::vector<double>> mags(tr.size()), grads;
  if (with_gradient) grads.resize(tr.size());
  for (std::size_t s = 0; s < tr.size(); ++s) {
    const auto& v = tr.fields[s].values();
    mags[s].resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[s][i] = std::abs(v[i]);
    if (with_gradient) grads[s] = gradient_magnitude(tr.fields[s]);
    for (std::size_t i = 0; i < v.size(); ++i) {
      global_max = std::max(global_max, mags[s][i]);
      if (with_gradient) global_max = std::max(global_max, grads[s][i]);
    }
  }
  if (global_max == 0.0) return 0.0;

  for (std::size_t s = 0; s < tr.size(); ++s) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      int slab = static_cast<int>((i / stride_below) % g.m);
      double a = mags[s][i] / global_max;
      double b = with_gradient ? grads[s][i] / global_max : 0.0;
      if (q_sup) {
        inner_sup[slab] = std::max({inner_sup[slab], a, b});
      } else {
        double contrib = std::pow(a, q);
        if (with_gradient) contrib += std::pow(b, q);
        inner_pow[slab] += weights[s] * contrib;
      }
    }
  }

  std::vector<double> inner(g.m);
  for (int slab = 0; slab < g.m; ++slab) {
    inner[slab] = q_sup ? inner_sup[slab]
                        : std::pow(inner_pow[slab] * dxprime, 1.0 / q);
  }

  double result;
  if (p_sup) {
    result = *std::max_element(inner.begin(), inner.end());
  } else {
    double mx = *std::max_element(inner.begin(), inner.end());
    if (mx == 0.0) return 0.0;
    double acc = 0.0;
    for (int slab = 0; slab < g.m; ++slab)
      acc += std::pow(inner[slab] / mx, p);
    result = mx * std::pow(acc * g.dx(), 1.0 / p);
  }
  return result * global_max;
}

TrajectorySeries restrict_interval(const TrajectorySeries& tr, double t_lo,
                                   double t_hi) {
  TrajectorySeries out;
  out.grid = tr.grid;
  out.blowup_suspect = tr.blowup_suspect;
  const double tol = 1e-12 * std::max(1.0, std::abs(t_hi));
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.times[i] >= t_lo - tol && tr.times[i] <= t_hi + tol) {
      out.times.push_back(tr.times[i]);
      out.fields.push_back(tr.fields[i]);
    }
  }
  return out;
}

namespace {

TrajectorySeries project_band(const TrajectorySeries& tr, double n) {
  TrajectorySeries out;
  out.grid = tr.grid;
  out.times = tr.times;
  out.fields.resize(tr.size());
  parallel_for(tr.size(), [&](std::size_t i) {
    out.fields[i] = lp_project(tr.fields[i], n);
  });
  return out;
}

TrajectorySeries project_band_directional(const TrajectorySeries& tr, double n,
                                          int ell) {
  TrajectorySeries out;
  out.grid = tr.grid;
  out.times = tr.times;
  out.fields.resize(tr.size());
  parallel_for(tr.size(), [&](std::size_t i) {
    out.fields[i] = directional_project(lp_project(tr.fields[i], n), n, ell);
  });
  return out;
}

bool band_is_zero(const TrajectorySeries& tr) {
  for (const auto& f : tr.fields)
    for (const auto& z : f.modes())
      if (std::norm(z) > 0.0) return false;
  return true;
}

}  // namespace

double x_band_norm(const TrajectorySeries& tr, double n, const NormConfig& cfg,
                   DyadicBreakdown* breakdown, bool* surrogate) {
  cfg.validate();
  TrajectorySeries band = project_band(tr, n);
  DyadicBreakdown bd;
  if (band_is_zero(band)) {
    if (breakdown) *breakdown = bd;
    return 0.0;
  }
  const double eps = cfg.eps;
  bd.components["strichartz_L2L4"] = n * mixed_strichartz_norm(band, 2.0, 4.0);
  bd.components["strichartz_L3L3"] = n * mixed_strichartz_norm(band, 3.0, 3.0);
  bd.components["strichartz_L6L12_5"] =
      n * mixed_strichartz_norm(band, 6.0, 12.0 / 5.0);
  bool sur = false;
  for (int ell = 1; ell <= tr.grid.d; ++ell) {
    bool s1 = false;
    double w = lateral_norm(band, 4.0 / (2.0 - eps), 4.0 / eps, ell, true,
                            cfg.exponent_cap, &s1);
    sur = sur || s1;
    bd.components["lateral_W_e" + std::to_string(ell)] =
        std::pow(n, -0.5 + eps) * w;
  }
  double total = 0.0;
  for (const auto& [k, v] : bd.components) total += v;
  bd.total = total;
  if (breakdown) *breakdown = bd;
  if (surrogate) *surrogate = sur;
  return total;
}

double y_band_norm(const TrajectorySeries& tr, double n, const NormConfig& cfg,
                   DyadicBreakdown* breakdown, bool* surrogate) {
  cfg.validate();
  TrajectorySeries band = project_band(tr, n);
  DyadicBreakdown bd;
  if (band_is_zero(band)) {
    if (breakdown) *breakdown = bd;
    return 0.0;
  }
  const double eps = cfg.eps;
  const double nb = angle_bracket(n);
  bd.components["strichartz_L3L6"] =
      std::pow(nb, 1.0 / 3.0 + 3.0 * eps) * mixed_strichartz_norm(band, 3.0, 6.0);
  bd.components["strichartz_L6L6"] = mixed_strichartz_norm(band, 6.0, 6.0);
  bool sur = false;
  for (int ell = 1; ell <= tr.grid.d; ++ell) {
    bool s1 = false;
    double w = lateral_norm(band, 4.0 / (2.0 - eps), 4.0 / eps, ell, true,
                            cfg.exponent_cap, &s1);
    sur = sur || s1;
    bd.components["lateral_W_e" + std::to_string(ell)] =
        std::pow(n, -1.0 / 6.0) * w;
  }
  for (int ell = 1; ell <= tr.grid.d; ++ell) {
    TrajectorySeries dir = project_band_directional(tr, n, ell);
    bool s2 = false;
    double lat = lateral_norm(dir, 4.0 / eps, 4.0 / (2.0 - eps), ell, false,
                              cfg.exponent_cap, &s2);
    sur = sur || s2;
    bd.components["lateral_dir_e" + std::to_string(ell)] =
        std::pow(nb, 1.0 / 3.0 + 3.0 * eps) * std::pow(n, 0.5 - eps) * lat;
  }
  double total = 0.0;
  for (const auto& [k, v] : bd.components) total += v;
  bd.total = total;
  if (breakdown) *breakdown = bd;
  if (surrogate) *surrogate = sur;
  return total;
}

double g_band_upper(const TrajectorySeries& tr, double n, const NormConfig& cfg,
                    DyadicBreakdown* breakdown, bool* surrogate) {
  cfg.validate();
  TrajectorySeries band = project_band(tr, n);
  DyadicBreakdown bd;
  if (band_is_zero(band)) {
    if (breakdown) *breakdown = bd;
    return 0.0;
  }
  const double eps = cfg.eps;
  double branch_l1l2 = n * mixed_strichartz_norm(band, 1.0, 2.0);
  bool sur = false;
  double branch_lateral = 0.0;
  for (int ell = 1; ell <= tr.grid.d; ++ell) {
    bool s1 = false;
    branch_lateral += std::pow(n, 0.5 + eps) *
                      lateral_norm(band, 4.0 / (4.0 - eps), 4.0 / (2.0 + eps),
                                   ell, false, cfg.exponent_cap, &s1);
    sur = sur || s1;
  }
  bd.components["branch_L1L2"] = branch_l1l2;
  bd.components["branch_lateral"] = branch_lateral;
  bd.total = std::min(branch_l1l2, branch_lateral);
  if (breakdown) *breakdown = bd;
  if (surrogate) *surrogate = sur;
  return bd.total;
}

namespace {

NormReport aggregate(const TrajectorySeries& tr, const NormConfig& cfg,
                     double (*band_fn)(const TrajectorySeries&, double,
                                       const NormConfig&, DyadicBreakdown*,
                                       bool*)) {
  NormReport rep;
  rep.interval[0] = tr.times.front();
  rep.interval[1] = tr.times.back();
  double sum_sq = 0.0;
  for (double n : dyadic_scales(tr.grid)) {
    DyadicBreakdown bd;
    bool sur = false;
    double total = band_fn(tr, n, cfg, &bd, &sur);
    rep.used_sup_surrogate = rep.used_sup_surrogate || sur;
    rep.per_dyadic[n] = bd;
    sum_sq += total * total;
  }
  rep.total = std::sqrt(sum_sq);
  return rep;
}

}  // namespace

NormReport x_norm(const TrajectorySeries& tr, const NormConfig& cfg) {
  return aggregate(tr, cfg, &x_band_norm);
}

NormReport y_norm(const TrajectorySeries& tr, const NormConfig& cfg) {
  return aggregate(tr, cfg, &y_band_norm);
}

NormReport g_norm_upper(const TrajectorySeries& tr, const NormConfig& cfg) {
  return aggregate(tr, cfg, &g_band_upper);
}

TrilinearResult trilinear_ratio(const TrajectorySeries& a,
                                const TrajectorySeries& b,
                                const TrajectorySeries& c,
                                const TrilinearBands& bands, int case_id,
                                const NormConfig& cfg) {
  cfg.validate();
  if (case_id < 1 || case_id > 8)
    throw validation_error("trilinear_ratio: case must be 1..8");
  if (!(bands.n1 >= bands.n2 && bands.n2 >= bands.n3))
    throw validation_error("trilinear_ratio: need N1 >= N2 >= N3");
  const double eps = cfg.eps;
  const double n = bands.n, n1 = bands.n1, n2 = bands.n2, n3 = bands.n3;

  TrajectorySeries p1 = project_band(a, n1);
  TrajectorySeries p2 = project_band(b, n2);
  TrajectorySeries p3 = project_band(c, n3);

  TrajectorySeries prod;
  prod.grid = a.grid;
  prod.times = a.times;
  prod.fields.resize(a.size());
  parallel_for(a.size(), [&](std::size_t i) {
    const auto& v1 = p1.fields[i].values();
    const auto& v2 = p2.fields[i].values();
    const auto& v3 = p3.fields[i].values();
    std::vector<cplx> v(v1.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = v1[j] * v2[j] * v3[j];
    prod.fields[i] =
        lp_project(SpectralField::from_values(a.grid, std::move(v)), n);
  });

  double lhs = 0.0;
  if (case_id <= 4) {
    auto w = trapezoid_weights(prod.times);
    double acc = 0.0;
    for (std::size_t i = 0; i < prod.size(); ++i)
      acc += w[i] * sobolev_norm(prod.fields[i], 1.0);
    lhs = n * acc;
  } else {
    lhs = std::pow(n, 0.5 + eps) *
          lateral_norm(prod, 4.0 / (4.0 - eps), 4.0 / (2.0 + eps), 1, true,
                       cfg.exponent_cap, nullptr);
  }

  // Which inputs carry X vs Y norms and the paper's frequency bracket.
  auto xn = [&](const TrajectorySeries& t, double nn) {
    return x_band_norm(t, nn, cfg, nullptr, nullptr);
  };
  auto yn = [&](const TrajectorySeries& t, double nn) {
    return y_band_norm(t, nn, cfg, nullptr, nullptr);
  };
  double bracket = 0.0, in1 = 0.0, in2 = 0.0, in3 = 0.0;
  const double r12 = n1 > 0 ? n2 / n1 : 0.0;
  const double r13 = n1 > 0 ? n3 / n1 : 0.0;
  const double r23 = n2 > 0 ? n3 / n2 : 0.0;
  switch (case_id) {
    case 1:
      bracket = n * (std::pow(r23, 2.0 / 3.0) / n1 + std::pow(r23, 1.0 / 3.0) +
                     std::pow(r13, 1.0 / 3.0) + std::pow(r12, 1.0 / 3.0));
      in1 = xn(a, n1); in2 = xn(b, n2); in3 = xn(c, n3);
      break;
    case 2:
      bracket = n * (std::pow(r23, 1.0 / 3.0) / n1 + std::pow(r23, 1.0 / 3.0) +
                     std::pow(r12, 2.0 / 3.0) + std::pow(r12, 1.0 / 3.0));
      in1 = xn(a, n1); in2 = yn(b, n2); in3 = xn(c, n3);
      break;
    case 3:
      bracket = n * (std::pow(r23, 2.0 / 3.0) / n1 + std::pow(r23, 2.0 / 3.0) +
                     std::pow(r12, 2.0 / 3.0) + r23);
      in1 = xn(a, n1); in2 = xn(b, n2); in3 = yn(c, n3);
      break;
    case 4:
      bracket = n * (std::pow(r23, 1.0 / 3.0) / n1 + std::pow(r23, 1.0 / 3.0) +
                     std::pow(r12, 2.0 / 3.0) + r23);
      in1 = xn(a, n1); in2 = yn(b, n2); in3 = yn(c, n3);
      break;
    case 5:
      bracket = std::pow(n / n1, 0.5 + eps) * std::pow(r13, 1.0 / 6.0);
      in1 = yn(a, n1); in2 = yn(b, n2); in3 = yn(c, n3);
      break;
    case 6:
      bracket = std::pow(n / n2, 0.5 + eps) * std::pow(r23, 0.5 - eps);
      in1 = yn(a, n1); in2 = xn(b, n2); in3 = xn(c, n3);
      break;
    case 7:
      bracket = std::pow(n / n3, 0.5 + eps) * std::pow(r12, 1.0 / 6.0);
      in1 = yn(a, n1); in2 = yn(b, n2); in3 = xn(c, n3);
      break;
    case 8:
      bracket = std::pow(n / n2, 0.5 + eps) * std::pow(r23, 1.0 / 6.0);
      in1 = yn(a, n1); in2 = xn(b, n2); in3 = yn(c, n3);
      break;
  }

  TrilinearResult res;
  res.lhs = lhs;
  res.rhs = bracket * in1 * in2 * in3;
  if (res.rhs > 0.0) {
    res.ratio = res.lhs / res.rhs;
    res.defined = true;
  } else {
    res.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    res.defined = lhs == 0.0;
  }
  return res;
}

}  // namespace nlslab
