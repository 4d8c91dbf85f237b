#include "nlslab/randomize.hpp"

#include <algorithm>
#include <cmath>

namespace nlslab {

namespace rng {

uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

uint64_t derive(uint64_t seed, std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ull;  // FNV offset
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return mix64(seed ^ mix64(h));
}

uint64_t derive(uint64_t seed, uint64_t index) {
  return mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ull));
}

namespace {
uint64_t word(uint64_t seed, uint64_t counter, uint64_t slot) {
  return mix64(seed ^ mix64(counter ^ mix64(slot + 0x632be59bd9b4e019ull)));
}
}  // namespace

double uniform(uint64_t seed, uint64_t counter) {
  return ((word(seed, counter, 0) >> 11) + 1) * 0x1.0p-53;
}

cplx unit_complex_gaussian(uint64_t seed, uint64_t counter) {
  double u1 = ((word(seed, counter, 1) >> 11) + 1) * 0x1.0p-53;
  double u2 = ((word(seed, counter, 2) >> 11) + 1) * 0x1.0p-53;
  double r = std::sqrt(-std::log(u1));
  double th = 2.0 * M_PI * u2;
  return cplx(r * std::cos(th), r * std::sin(th));
}

double standard_normal(uint64_t seed, uint64_t counter) {
  double u1 = ((word(seed, counter, 3) >> 11) + 1) * 0x1.0p-53;
  double u2 = ((word(seed, counter, 4) >> 11) + 1) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

uint64_t lattice_counter(const std::vector<int>& k) {
  uint64_t packed = 0;
  for (std::size_t a = 0; a < k.size(); ++a) {
    uint64_t zig = (k[a] >= 0) ? 2ull * static_cast<uint64_t>(k[a])
                               : 2ull * static_cast<uint64_t>(-k[a]) - 1ull;
    packed |= (zig & 0xffffull) << (16 * a);
  }
  return packed;
}

}  // namespace rng

SpectralField randomize(const SpectralField& f, const RandomSeedPlan& plan) {
  const GridSpec& g = f.grid();
  auto part = UnitPartition::get(g);
  const auto& mo = f.modes();
  std::vector<cplx> out(mo.size(), cplx(0.0, 0.0));
  for (std::size_t idx = 0; idx < part->lattice_size(); ++idx) {
    const auto& weights = part->weights(idx);
    if (weights.empty()) continue;
    cplx gk = plan.coefficient(part->lattice_point(idx));
    for (const auto& [mode, w] : weights) out[mode] += gk * w * mo[mode];
  }
  return SpectralField::from_modes(g, std::move(out));
}

MomentEstimate moment_estimate(const std::vector<cplx>& coeffs, double p,
                               int n_samples, const RandomSeedPlan& plan) {
  if (p < 2.0) throw validation_error("moment_estimate: p must be >= 2");
  if (n_samples < 100)
    throw validation_error("moment_estimate: need at least 100 samples");
  double acc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    uint64_t sub = rng::derive(plan.seed, static_cast<uint64_t>(s));
    cplx sum(0.0, 0.0);
    for (std::size_t n = 0; n < coeffs.size(); ++n)
      sum += coeffs[n] * rng::unit_complex_gaussian(sub, n);
    acc += std::pow(std::abs(sum), p);
  }
  double lp = std::pow(acc / n_samples, 1.0 / p);
  double l2 = 0.0;
  for (const auto& c : coeffs) l2 += std::norm(c);
  l2 = std::sqrt(l2);
  MomentEstimate est;
  est.lp_norm = lp;
  est.ratio = l2 > 0.0 ? lp / (std::sqrt(p) * l2) : 0.0;
  return est;
}

TailReport tail_diagnostic(const SpectralField& f,
                           const std::function<double(const SpectralField&)>& norm_eval,
                           const std::vector<double>& lambdas, int n_samples,
                           const RandomSeedPlan& plan) {
  if (n_samples < 200)
    throw validation_error("tail_diagnostic: need at least 200 samples");
  std::vector<double> values(n_samples);
  parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t s) {
    RandomSeedPlan sub{rng::derive(plan.seed, static_cast<uint64_t>(s)), false};
    values[s] = norm_eval(randomize(f, sub));
  });

  TailReport rep;
  rep.n_samples = n_samples;
  rep.lambdas = lambdas;
  std::sort(rep.lambdas.begin(), rep.lambdas.end());
  rep.empirical_prob.resize(rep.lambdas.size());
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
    int count = 0;
    for (double v : values)
      if (v > rep.lambdas[i]) ++count;
    rep.empirical_prob[i] = static_cast<double>(count) / n_samples;
  }

  // log p = intercept + slope * lambda^2 over thresholds with p > 0.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
    if (rep.empirical_prob[i] <= 0.0) continue;
    double x = rep.lambdas[i] * rep.lambdas[i];
    double y = std::log(rep.empirical_prob[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    ++n;
  }
  if (n < 3) {
    rep.degenerate = true;
    return rep;
  }
  double denom = n * sxx - sx * sx;
  double ss_tot = syy - sy * sy / n;
  if (denom <= 0.0 || ss_tot <= 0.0) {
    rep.degenerate = true;
    return rep;
  }
  rep.fitted_slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - rep.fitted_slope * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
    if (rep.empirical_prob[i] <= 0.0) continue;
    double x = rep.lambdas[i] * rep.lambdas[i];
    double y = std::log(rep.empirical_prob[i]);
    double e = y - (intercept + rep.fitted_slope * x);
    ss_res += e * e;
  }
  rep.r_squared = 1.0 - ss_res / ss_tot;
  return rep;
}

}  // namespace nlslab
