#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

// Complex field on the periodic grid. Immutable after construction; the
// missing representation (values or modes) is materialized once under an
// internal lock, so fields are safe to share across threads.
//
// Mode normalization: modes[j] = (1/m^d) sum_i values[i] e^{-2 pi I i.j/m},
// so ||f||_2^2 = volume * sum_j |modes[j]|^2.
class SpectralField {
 public:
  SpectralField() = default;

  static SpectralField from_values(GridSpec grid, std::vector<cplx> values);
  static SpectralField from_modes(GridSpec grid, std::vector<cplx> modes);
  static SpectralField zero(const GridSpec& grid);

  const GridSpec& grid() const;
  const std::vector<cplx>& values() const;
  const std::vector<cplx>& modes() const;
  bool empty() const { return !state_; }

  // Free-form annotations ("out-of-band projection", ...), set at creation.
  const std::vector<std::string>& notes() const;
  SpectralField with_note(std::string note) const;

 private:
  struct State;
  explicit SpectralField(std::shared_ptr<const State> s) : state_(std::move(s)) {}
  std::shared_ptr<const State> state_;
};

// --- field algebra (all pure) ---

SpectralField map_values(const SpectralField& f,
                         const std::function<cplx(cplx)>& op);
SpectralField add(const SpectralField& a, const SpectralField& b);
SpectralField sub(const SpectralField& a, const SpectralField& b);
SpectralField scale(const SpectralField& f, cplx c);

// Applies a frequency multiplier w(flat mode index) to the modes.
SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<double(std::size_t)>& w);

// --- norms and derivatives ---

double l2_norm(const SpectralField& f);
// Quadrature of |f|^r by cell volume; r = infinity -> grid max.
double lebesgue_norm(const SpectralField& f, double r);
// (sum <xi>^{2s} |f_hat|^2 vol)^{1/2}; s = 0 agrees with the L2 norm.
double sobolev_norm(const SpectralField& f, double s);
double h1_inner_abs(const SpectralField& a, const SpectralField& b);

// Partial derivative along one axis via the i*xi multiplier (Nyquist zeroed).
SpectralField derivative(const SpectralField& f, int axis);
std::vector<SpectralField> gradient(const SpectralField& f);
double grad_l2_sq(const SpectralField& f);

}  // namespace nlslab
