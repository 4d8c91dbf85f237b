#include "nlslab/potential.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

std::vector<double> sample_radial(const GridSpec& g,
                                  const std::function<double(double)>& f) {
  std::vector<double> out(g.size());
  std::vector<int> ax(g.d);
  for (std::size_t i = 0; i < out.size(); ++i) {
    g.unflatten(i, ax.data());
    double r_sq = 0.0;
    for (int a = 0; a < g.d; ++a) {
      double x = g.axis_coord(ax[a]);
      r_sq += x * x;
    }
    out[i] = f(std::sqrt(r_sq));
  }
  return out;
}

double min_image_dist_sq(const GridSpec& g, const int* ax) {
  double s = 0.0;
  const double box = 2.0 * g.half_len;
  for (int a = 0; a < g.d; ++a) {
    double x = ax[a] * g.dx();
    if (x > g.half_len) x -= box;
    s += x * x;
  }
  return s;
}

// Exact integral of 1/|z| over a d-ball whose volume equals the grid cell:
// surface(S^{d-1}) * r^{d-1}/(d-1) with alpha(d) r^d = cellvol.
double self_cell_kernel_integral(const GridSpec& g) {
  const int d = g.d;
  double r = std::pow(g.cell_volume() / unit_ball_volume(d), 1.0 / d);
  double surface = d * unit_ball_volume(d);  // |S^{d-1}| = d alpha(d)
  return surface * std::pow(r, d - 1) / (d - 1);
}

}  // namespace

PotentialSpec::PotentialSpec(GridSpec grid, std::vector<double> samples,
                             std::string kind)
    : grid_(std::move(grid)), samples_(std::move(samples)), kind_(std::move(kind)) {
  neg_.resize(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i)
    neg_[i] = std::min(samples_[i], 0.0);
}

PotentialSpec PotentialSpec::zero(const GridSpec& grid) {
  return PotentialSpec(grid, std::vector<double>(grid.size(), 0.0), "zero");
}

PotentialSpec PotentialSpec::gaussian_well(const GridSpec& grid, double depth,
                                           double width) {
  if (!(width > 0.0)) throw validation_error("potential: width must be > 0");
  auto s = sample_radial(grid, [&](double r) {
    return -depth * std::exp(-r * r / (width * width));
  });
  return PotentialSpec(grid, std::move(s), "gaussian_well");
}

PotentialSpec PotentialSpec::truncated_inverse_power(const GridSpec& grid,
                                                     double strength,
                                                     double exponent,
                                                     double cutoff) {
  if (!(cutoff > 0.0)) throw validation_error("potential: cutoff must be > 0");
  auto s = sample_radial(grid, [&](double r) {
    return strength / std::pow(std::max(r, cutoff), exponent);
  });
  return PotentialSpec(grid, std::move(s), "truncated_inverse_power");
}

PotentialSpec PotentialSpec::tabulated(const SpectralField& f) {
  const auto& v = f.values();
  std::vector<double> s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i].real();
  return PotentialSpec(f.grid(), std::move(s), "tabulated");
}

double unit_ball_volume(int d) {
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

namespace {

// x -> sum_y |V(y)| K(x-y) cellvol as a periodic convolution evaluated with
// one FFT pair; K is 1/|.| at min-image distance with the analytic self-cell
// value at the origin.
double kato_sup(const GridSpec& g, const std::vector<double>& absv) {
  if (g.d < 3) throw validation_error("kato_norm: requires d >= 3");
  const std::size_t n = g.size();
  std::vector<cplx> kern(n), dens(n);
  std::vector<int> ax(g.d);
  for (std::size_t i = 0; i < n; ++i) {
    g.unflatten(i, ax.data());
    double dist_sq = min_image_dist_sq(g, ax.data());
    double k = (i == 0) ? self_cell_kernel_integral(g) / g.cell_volume()
                        : 1.0 / std::sqrt(dist_sq);
    kern[i] = cplx(k, 0.0);
    dens[i] = cplx(absv[i], 0.0);
  }
  std::vector<cplx> kern_hat(n), dens_hat(n), prod(n), conv(n);
  fft::forward(g.dims(), kern.data(), kern_hat.data());
  fft::forward(g.dims(), dens.data(), dens_hat.data());
  for (std::size_t i = 0; i < n; ++i) prod[i] = kern_hat[i] * dens_hat[i];
  fft::backward(g.dims(), prod.data(), conv.data());
  const double scale = g.cell_volume() / static_cast<double>(n);
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, conv[i].real() * scale);
  return sup;
}

double lhalf_of(const GridSpec& g, const std::vector<double>& v) {
  const double p = 0.5 * g.d;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

}  // namespace

double kato_norm(const PotentialSpec& v, const GridSpec& grid) {
  std::vector<double> absv(v.samples().size());
  for (std::size_t i = 0; i < absv.size(); ++i) absv[i] = std::abs(v.samples()[i]);
  return kato_sup(grid, absv);
}

double kato_norm_negative_part(const PotentialSpec& v, const GridSpec& grid) {
  std::vector<double> absv(v.negative_part().size());
  for (std::size_t i = 0; i < absv.size(); ++i)
    absv[i] = std::abs(v.negative_part()[i]);
  return kato_sup(grid, absv);
}

double lhalf_norm(const PotentialSpec& v, const GridSpec& grid) {
  if (grid.d < 3) throw validation_error("lhalf_norm: requires d >= 3");
  return lhalf_of(grid, v.samples());
}

double lhalf_norm_negative_part(const PotentialSpec& v, const GridSpec& grid) {
  if (grid.d < 3) throw validation_error("lhalf_norm: requires d >= 3");
  return lhalf_of(grid, v.negative_part());
}

AdmissibilityReport admissibility(const PotentialSpec& v, const GridSpec& grid) {
  AdmissibilityReport r;
  r.alpha_d = unit_ball_volume(grid.d);
  r.threshold = grid.d * (grid.d - 2) * r.alpha_d;
  r.kato_norm = kato_norm(v, grid);
  r.kato_norm_neg = kato_norm_negative_part(v, grid);
  r.lhalf_norm = lhalf_norm(v, grid);
  r.admissible = std::isfinite(r.kato_norm) && std::isfinite(r.lhalf_norm) &&
                 r.kato_norm_neg < r.threshold;
  return r;
}

PotentialSpec default_well(const GridSpec& grid, double width,
                           double kato_fraction) {
  PotentialSpec unit = PotentialSpec::gaussian_well(grid, 1.0, width);
  double unit_kato = kato_norm_negative_part(unit, grid);
  double threshold = grid.d * (grid.d - 2) * unit_ball_volume(grid.d);
  double depth = kato_fraction * threshold / unit_kato;  // exact by homogeneity
  return PotentialSpec::gaussian_well(grid, depth, width);
}

}  // namespace nlslab
