#include "nlslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "nlslab/fft.hpp"

namespace nlslab {

struct SpectralField::State {
  GridSpec grid;
  mutable std::vector<cplx> values;
  mutable std::vector<cplx> modes;
  mutable std::mutex lock;
  std::vector<std::string> notes;
};

SpectralField SpectralField::from_values(GridSpec grid, std::vector<cplx> values) {
  if (values.size() != grid.size())
    throw validation_error("field: values size does not match grid");
  auto s = std::make_shared<State>();
  s->grid = std::move(grid);
  s->values = std::move(values);
  return SpectralField(std::move(s));
}

SpectralField SpectralField::from_modes(GridSpec grid, std::vector<cplx> modes) {
  if (modes.size() != grid.size())
    throw validation_error("field: modes size does not match grid");
  auto s = std::make_shared<State>();
  s->grid = std::move(grid);
  s->modes = std::move(modes);
  return SpectralField(std::move(s));
}

SpectralField SpectralField::zero(const GridSpec& grid) {
  return from_values(grid, std::vector<cplx>(grid.size(), cplx(0.0, 0.0)));
}

const GridSpec& SpectralField::grid() const { return state_->grid; }

const std::vector<std::string>& SpectralField::notes() const {
  return state_->notes;
}

const std::vector<cplx>& SpectralField::values() const {
  const State& s = *state_;
  std::lock_guard<std::mutex> guard(s.lock);
  if (s.values.empty()) {
    s.values.resize(s.modes.size());
    fft::backward(s.grid.dims(), s.modes.data(), s.values.data());
  }
  return s.values;
}

const std::vector<cplx>& SpectralField::modes() const {
  const State& s = *state_;
  std::lock_guard<std::mutex> guard(s.lock);
  if (s.modes.empty()) {
    s.modes.resize(s.values.size());
    fft::forward(s.grid.dims(), s.values.data(), s.modes.data());
    const double inv_n = 1.0 / static_cast<double>(s.grid.size());
    for (auto& z : s.modes) z *= inv_n;
  }
  return s.modes;
}

SpectralField SpectralField::with_note(std::string note) const {
  auto s = std::make_shared<State>();
  s->grid = state_->grid;
  {
    std::lock_guard<std::mutex> guard(state_->lock);
    s->values = state_->values;
    s->modes = state_->modes;
  }
  s->notes = state_->notes;
  s->notes.push_back(std::move(note));
  return SpectralField(std::move(s));
}

SpectralField map_values(const SpectralField& f,
                         const std::function<cplx(cplx)>& op) {
  std::vector<cplx> out(f.values().size());
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = op(v[i]);
  return SpectralField::from_values(f.grid(), std::move(out));
}

SpectralField add(const SpectralField& a, const SpectralField& b) {
  const auto& va = a.values();
  const auto& vb = b.values();
  std::vector<cplx> out(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) out[i] = va[i] + vb[i];
  return SpectralField::from_values(a.grid(), std::move(out));
}

SpectralField sub(const SpectralField& a, const SpectralField& b) {
  const auto& va = a.values();
  const auto& vb = b.values();
  std::vector<cplx> out(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) out[i] = va[i] - vb[i];
  return SpectralField::from_values(a.grid(), std::move(out));
}

SpectralField scale(const SpectralField& f, cplx c) {
  const auto& v = f.values();
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
  return SpectralField::from_values(f.grid(), std::move(out));
}

SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<double(std::size_t)>& w) {
  const auto& mo = f.modes();
  std::vector<cplx> out(mo.size());
  for (std::size_t i = 0; i < mo.size(); ++i) out[i] = w(i) * mo[i];
  return SpectralField::from_modes(f.grid(), std::move(out));
}

double l2_norm(const SpectralField& f) {
  const auto& v = f.values();
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_volume());
}

double lebesgue_norm(const SpectralField& f, double r) {
  if (!(r >= 1.0)) throw validation_error("lebesgue_norm: r must be >= 1");
  const auto& v = f.values();
  if (std::isinf(r)) {
    double mx = 0.0;
    for (const auto& z : v) mx = std::max(mx, std::abs(z));
    return mx;
  }
  // Scale by the max to keep |.|^r representable for large r.
  double mx = 0.0;
  for (const auto& z : v) mx = std::max(mx, std::abs(z));
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& z : v) s += std::pow(std::abs(z) / mx, r);
  return mx * std::pow(s * f.grid().cell_volume(), 1.0 / r);
}

double sobolev_norm(const SpectralField& f, double s) {
  const auto& mo = f.modes();
  const GridSpec& g = f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < mo.size(); ++i) {
    double w = std::pow(1.0 + g.freq_norm_sq(i), s);
    acc += w * std::norm(mo[i]);
  }
  return std::sqrt(acc * g.volume());
}

double h1_inner_abs(const SpectralField& a, const SpectralField& b) {
  const auto& ma = a.modes();
  const auto& mb = b.modes();
  const GridSpec& g = a.grid();
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < ma.size(); ++i)
    acc += (1.0 + g.freq_norm_sq(i)) * ma[i] * std::conj(mb[i]);
  return std::abs(acc) * g.volume();
}

SpectralField derivative(const SpectralField& f, int axis) {
  const GridSpec& g = f.grid();
  if (axis < 0 || axis >= g.d) throw validation_error("derivative: bad axis");
  const auto& mo = f.modes();
  std::vector<cplx> out(mo.size());
  const std::size_t stride_below = [&] {
    std::size_t s = 1;
    for (int a = axis + 1; a < g.d; ++a) s *= g.m;
    return s;
  }();
  for (std::size_t i = 0; i < mo.size(); ++i) {
    int j = static_cast<int>((i / stride_below) % g.m);
    double xi = g.is_nyquist_index(j) ? 0.0 : g.axis_freq[j];
    out[i] = cplx(0.0, xi) * mo[i];
  }
  return SpectralField::from_modes(g, std::move(out));
}

std::vector<SpectralField> gradient(const SpectralField& f) {
  std::vector<SpectralField> out;
  out.reserve(f.grid().d);
  for (int a = 0; a < f.grid().d; ++a) out.push_back(derivative(f, a));
  return out;
}

double grad_l2_sq(const SpectralField& f) {
  // Consistent with derivative(): Nyquist rows carry no derivative.
  const auto& mo = f.modes();
  const GridSpec& g = f.grid();
  double acc = 0.0;
  std::vector<int> ax(g.d);
  for (std::size_t i = 0; i < mo.size(); ++i) {
    g.unflatten(i, ax.data());
    double w = 0.0;
    for (int a = 0; a < g.d; ++a) {
      if (g.is_nyquist_index(ax[a])) continue;
      double xi = g.axis_freq[ax[a]];
      w += xi * xi;
    }
    acc += w * std::norm(mo[i]);
  }
  return acc * g.volume();
}

}  // namespace nlslab
