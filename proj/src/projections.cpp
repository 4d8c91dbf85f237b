#include "nlslab/projections.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "nlslab/cutoff.hpp"

namespace nlslab {

std::vector<double> dyadic_scales(const GridSpec& grid) {
  const double xi_min = grid.freq_step();
  const double xi_max = grid.max_freq();
  // Lowest scale strictly below xi_min so varphi(2 xi_min / N_lo) = 0;
  // highest at or above the corner so varphi(|xi|/N_hi) = 1 there.
  int j_lo = static_cast<int>(std::floor(std::log2(xi_min))) - 1;
  int j_hi = static_cast<int>(std::ceil(std::log2(xi_max)));
  std::vector<double> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(std::ldexp(1.0, j));
  return out;
}

bool in_dyadic_band(const GridSpec& grid, double n) {
  auto scales = dyadic_scales(grid);
  for (double s : scales)
    if (std::abs(s - n) <= 1e-12 * s) return true;
  return false;
}

SpectralField lp_project(const SpectralField& f, double n) {
  const GridSpec& g = f.grid();
  if (!(n > 0.0)) throw validation_error("lp_project: N must be positive");
  if (!in_dyadic_band(g, n)) {
    return SpectralField::zero(g).with_note("out-of-band dyadic projection");
  }
  return apply_multiplier(f, [&g, n](std::size_t i) {
    double a = std::sqrt(g.freq_norm_sq(i));
    return CutoffProfile::varphi(a / n) - CutoffProfile::varphi(2.0 * a / n);
  });
}

SpectralField lp_project_low(const SpectralField& f, double n) {
  const GridSpec& g = f.grid();
  return apply_multiplier(f, [&g, n](std::size_t i) {
    return CutoffProfile::varphi(std::sqrt(g.freq_norm_sq(i)) / n);
  });
}

UnitPartition::UnitPartition(const GridSpec& grid) : grid_(grid) {
  const double r = CutoffProfile::psi_support_radius(grid.d);
  kmax_ = static_cast<int>(std::floor(grid.max_axis_freq() + r)) ;
  const int span = 2 * kmax_ + 1;

  std::size_t lattice_count = 1;
  for (int a = 0; a < grid.d; ++a) lattice_count *= span;
  lattice_.resize(lattice_count);
  points_.resize(lattice_count);

  // Normalizer sum_k psi(xi - k) per mode. The support radius exceeds the
  // deep-hole distance sqrt(d)/2, so the sum is strictly positive.
  const std::size_t n_modes = grid.size();
  std::vector<double> normalizer(n_modes, 0.0);
  std::vector<int> ax(grid.d);
  const int reach = static_cast<int>(std::ceil(r));

  auto for_each_neighbor = [&](const std::vector<double>& xi, auto&& fn) {
    std::vector<int> base(grid.d), off(grid.d, -reach);
    for (int a = 0; a < grid.d; ++a)
      base[a] = static_cast<int>(std::lround(xi[a]));
    for (;;) {
      double dist_sq = 0.0;
      std::vector<int> k(grid.d);
      for (int a = 0; a < grid.d; ++a) {
        k[a] = base[a] + off[a];
        double dxa = xi[a] - k[a];
        dist_sq += dxa * dxa;
      }
      if (dist_sq < r * r) fn(k, std::sqrt(dist_sq));
      int a = grid.d - 1;
      while (a >= 0 && ++off[a] > reach) off[a--] = -reach;
      if (a < 0) break;
    }
  };

  std::vector<double> xi(grid.d);
  for (std::size_t i = 0; i < n_modes; ++i) {
    grid.unflatten(i, ax.data());
    for (int a = 0; a < grid.d; ++a) xi[a] = grid.axis_freq[ax[a]];
    for_each_neighbor(xi, [&](const std::vector<int>&, double dist) {
      normalizer[i] += CutoffProfile::psi_raw(dist, grid.d);
    });
  }

  for (std::size_t i = 0; i < n_modes; ++i) {
    grid.unflatten(i, ax.data());
    for (int a = 0; a < grid.d; ++a) xi[a] = grid.axis_freq[ax[a]];
    for_each_neighbor(xi, [&](const std::vector<int>& k, double dist) {
      std::size_t idx = find(k);
      if (idx == npos) return;  // psi tail reaching past the enumerated box
      double w = CutoffProfile::psi_raw(dist, grid.d) / normalizer[i];
      if (w > 0.0) points_[idx].emplace_back(i, w);
    });
  }

  // Materialize lattice coordinates for every enumerated point.
  for (std::size_t idx = 0; idx < lattice_count; ++idx) {
    std::vector<int> k(grid.d);
    std::size_t rem = idx;
    for (int a = grid.d - 1; a >= 0; --a) {
      k[a] = static_cast<int>(rem % span) - kmax_;
      rem /= span;
    }
    lattice_[idx] = std::move(k);
  }
}

const std::vector<int>& UnitPartition::lattice_point(std::size_t idx) const {
  return lattice_[idx];
}

const std::vector<std::pair<std::size_t, double>>& UnitPartition::weights(
    std::size_t idx) const {
  return points_[idx];
}

std::size_t UnitPartition::find(const std::vector<int>& k) const {
  std::size_t idx = 0;
  const int span = 2 * kmax_ + 1;
  for (int a = 0; a < grid_.d; ++a) {
    int c = k[a] + kmax_;
    if (c < 0 || c >= span) return npos;
    idx = idx * span + static_cast<std::size_t>(c);
  }
  return idx;
}

std::shared_ptr<const UnitPartition> UnitPartition::get(const GridSpec& grid) {
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const UnitPartition>> cache;
  static std::mutex lock;
  std::lock_guard<std::mutex> guard(lock);
  auto key = std::make_tuple(grid.d, grid.m, grid.half_len);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto part = std::make_shared<const UnitPartition>(grid);
  cache.emplace(key, part);
  return part;
}

SpectralField unit_project(const SpectralField& f, const std::vector<int>& k) {
  const GridSpec& g = f.grid();
  if (static_cast<int>(k.size()) != g.d)
    throw validation_error("unit_project: k dimension mismatch");
  auto part = UnitPartition::get(g);
  std::size_t idx = part->find(k);
  std::vector<cplx> out(g.size(), cplx(0.0, 0.0));
  if (idx == UnitPartition::npos || part->weights(idx).empty()) {
    return SpectralField::from_modes(g, std::move(out))
        .with_note("out-of-band unit projection");
  }
  const auto& mo = f.modes();
  for (const auto& [mode, w] : part->weights(idx)) out[mode] = w * mo[mode];
  return SpectralField::from_modes(g, std::move(out));
}

SpectralField directional_project(const SpectralField& f, double n, int ell) {
  const GridSpec& g = f.grid();
  if (ell < 1 || ell > g.d)
    throw validation_error("directional_project: axis out of range");
  if (!(n > 0.0)) throw validation_error("directional_project: N must be positive");
  const int axis = ell - 1;
  std::size_t stride_below = 1;
  for (int a = axis + 1; a < g.d; ++a) stride_below *= g.m;
  const auto& mo = f.modes();
  std::vector<cplx> out(mo.size());
  for (std::size_t i = 0; i < mo.size(); ++i) {
    int j = static_cast<int>((i / stride_below) % g.m);
    out[i] = CutoffProfile::phi_dir(std::abs(g.axis_freq[j]) / n) * mo[i];
  }
  return SpectralField::from_modes(g, std::move(out));
}

}  // namespace nlslab
