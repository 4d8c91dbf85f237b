#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlslab/evolution.hpp"
#include "test_util.hpp"

using namespace nlslab;
using namespace nlslab::testutil;

TEST_CASE("linear propagation basics") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec zero = PotentialSpec::zero(g);

  SUBCASE("t = 0 is the identity") {
    SpectralField f = random_band_field(g, 3);
    SpectralField out = linear_propagate(f, 0.0, zero, 1e-2);
    CHECK(field_l2_diff(f, out) == 0.0);
  }

  SUBCASE("free single mode picks up exactly e^{-it|xi|^2}") {
    SpectralField f = single_mode(g, {2, 1});
    double xi_sq = g.freq_norm_sq(g.flatten(std::vector<int>{2, 1}.data()));
    double t = 0.7;
    SpectralField out = linear_propagate(f, t, zero, 1e-2);
    cplx expected = std::exp(cplx(0.0, -t * xi_sq));
    const auto& mo = out.modes();
    std::size_t idx = g.flatten(std::vector<int>{2, 1}.data());
    CHECK(std::abs(mo[idx] - expected) < 1e-12);
  }

  SUBCASE("dt <= 0 rejected") {
    SpectralField f = random_band_field(g, 5);
    CHECK_THROWS_AS(linear_propagate(f, 1.0, zero, 0.0), validation_error);
  }

  SUBCASE("dt must divide t") {
    SpectralField f = random_band_field(g, 5);
    PotentialSpec well = PotentialSpec::gaussian_well(g, 1.0, 1.0);
    CHECK_THROWS_AS(linear_propagate(f, 0.15, well, 0.1), validation_error);
  }
}

TEST_CASE("unitarity of the linear flow with a potential") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec well = PotentialSpec::gaussian_well(g, 1.2, 1.0);
  SpectralField f = random_band_field(g, 7, 1.0);
  double n0 = l2_norm(f);

  SpectralField coarse = linear_propagate(f, 1.0, well, 1e-2);
  SpectralField fine = linear_propagate(f, 1.0, well, 5e-3);
  CHECK(std::abs(l2_norm(coarse) - n0) < 1e-10 * n0);
  CHECK(std::abs(l2_norm(fine) - n0) < 1e-10 * n0);
  // dt -> dt/2 Richardson: the two propagations agree at O(dt^2).
  double diff = field_l2_diff(coarse, fine);
  SpectralField finer = linear_propagate(f, 1.0, well, 2.5e-3);
  double diff2 = field_l2_diff(fine, finer);
  CHECK(diff2 < diff);
}

TEST_CASE("nls_evolve basics") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec zero = PotentialSpec::zero(g);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.snapshot_stride = 100;

  SUBCASE("zero datum stays zero") {
    TrajectorySeries tr = nls_evolve(SpectralField::zero(g), cfg, zero, 0.2);
    CHECK(!tr.blowup_suspect);
    for (const auto& f : tr.fields) CHECK(l2_norm(f) == 0.0);
  }

  SUBCASE("constant datum reduces to the phase ODE") {
    const cplx c(0.8, -0.3);
    std::vector<cplx> vals(g.size(), c);
    SpectralField u0 = SpectralField::from_values(g, vals);
    TrajectorySeries tr = nls_evolve(u0, cfg, zero, 0.25);
    double t = tr.times.back();
    cplx expected = c * std::exp(cplx(0.0, t * std::norm(c)));
    const auto& out = tr.fields.back().values();
    for (std::size_t i = 0; i < out.size(); i += 97)
      CHECK(std::abs(out[i] - expected) < 1e-12);
  }

  SUBCASE("invalid configs rejected") {
    EvolveConfig bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(nls_evolve(SpectralField::zero(g), bad, zero, 0.1),
                    validation_error);
    EvolveConfig mixed = cfg;
    mixed.kind = Nonlinearity::mixed;
    mixed.q = 5.0;  // q must be < 2 + 4/d
    CHECK_THROWS_AS(nls_evolve(SpectralField::zero(g), mixed, zero, 0.1),
                    validation_error);
  }
}

TEST_CASE("mass and energy closed forms") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec zero = PotentialSpec::zero(g);
  EvolveConfig cfg;

  SUBCASE("zero field") {
    CHECK(mass(SpectralField::zero(g)) == 0.0);
    CHECK(energy(SpectralField::zero(g), cfg, zero) == 0.0);
  }

  SUBCASE("single mode kinetic term") {
    double a0 = 0.35;
    SpectralField f = scale(single_mode(g, {3, 1}), a0);
    double xi_sq = g.freq_norm_sq(g.flatten(std::vector<int>{3, 1}.data()));
    double vol = g.volume();
    double kinetic = 0.5 * xi_sq * a0 * a0 * vol;
    double quartic = 0.25 * std::pow(a0, 4.0) * vol;  // |u| is constant
    CHECK(rel_diff(energy(f, cfg, zero), kinetic - quartic) < 1e-12);
  }
}

TEST_CASE("conservation along the cubic flow") {
  GridSpec g = GridSpec::make(2, 64, 4.0);
  PotentialSpec well = PotentialSpec::gaussian_well(g, 1.0, 1.0);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.snapshot_stride = 250;
  SpectralField u0 = scale(gaussian_bump(g, 0.9), 0.5);

  double m0 = mass(u0);
  double e0 = energy(u0, cfg, well);
  TrajectorySeries tr = nls_evolve(u0, cfg, well, 1.0);
  REQUIRE(!tr.blowup_suspect);
  double m_drift = 0.0, e_drift = 0.0;
  for (const auto& f : tr.fields) {
    m_drift = std::max(m_drift, std::abs(mass(f) - m0) / m0);
    e_drift = std::max(e_drift, std::abs(energy(f, cfg, well) - e0) / std::abs(e0));
  }
  CHECK(m_drift <= 1e-8);
  CHECK(e_drift <= 1e-6);
}

TEST_CASE("time reversibility") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec well = PotentialSpec::gaussian_well(g, 0.8, 1.2);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.snapshot_stride = 1 << 20;  // endpoints only
  SpectralField u0 = scale(gaussian_bump(g, 1.0), 0.4);

  TrajectorySeries fwd = nls_evolve(u0, cfg, well, 0.5);
  REQUIRE(!fwd.blowup_suspect);
  TrajectorySeries bwd = nls_evolve(fwd.fields.back(), cfg, well, -0.5);
  REQUIRE(!bwd.blowup_suspect);
  CHECK(field_l2_diff(bwd.fields.back(), u0) < 1e-7 * l2_norm(u0));
}

TEST_CASE("Strang splitting is second order") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec well = PotentialSpec::gaussian_well(g, 1.0, 1.0);
  SpectralField u0 = scale(gaussian_bump(g, 1.0), 0.5);
  const double T = 0.25;

  auto evolve_at = [&](double dt) {
    EvolveConfig cfg;
    cfg.dt = dt;
    cfg.snapshot_stride = 1 << 20;
    return nls_evolve(u0, cfg, well, T).fields.back();
  };
  SpectralField ref = evolve_at(T / 2048.0);
  double e1 = field_l2_diff(evolve_at(T / 64.0), ref);
  double e2 = field_l2_diff(evolve_at(T / 128.0), ref);
  double ratio = e1 / e2;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("focusing blowup aborts with a flagged trajectory") {
  GridSpec g = GridSpec::make(2, 32, 4.0);
  PotentialSpec zero = PotentialSpec::zero(g);
  EvolveConfig cfg;
  cfg.dt = 5e-4;
  cfg.snapshot_stride = 10;
  // Focusing growth is grid-arrested near sqrt(mass)/dx; a cap inside the
  // transient range exercises the abort path.
  cfg.blowup_amplitude = 28.0;
  SpectralField u0 = gaussian_bump(g, 0.5, 20.0);  // far above critical mass

  TrajectorySeries tr = nls_evolve(u0, cfg, zero, 1.0);
  CHECK(tr.blowup_suspect);
  CHECK(tr.times.back() < 1.0);  // partial trajectory retained
  CHECK(!tr.fields.empty());
}

TEST_CASE("mixed nonlinearity energy matches the functional form") {
  GridSpec g = GridSpec::make(3, 16, 4.0);
  PotentialSpec well = PotentialSpec::gaussian_well(g, 0.6, 1.0);
  EvolveConfig cfg;
  cfg.kind = Nonlinearity::mixed;
  cfg.q = 2.5;
  cfg.include_critical = true;
  SpectralField u = scale(gaussian_bump(g, 1.1), 0.7);

  const auto& vals = u.values();
  const auto& pot = well.samples();
  double pot_term = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    pot_term += pot[i] * std::norm(vals[i]);
  pot_term *= 0.5 * g.cell_volume();
  double crit = 6.0;  // 2d/(d-2) at d=3
  double expected = 0.5 * grad_l2_sq(u) + pot_term -
                    std::pow(lebesgue_norm(u, 2.5), 2.5) / 2.5 -
                    std::pow(lebesgue_norm(u, crit), crit) / crit;
  CHECK(rel_diff(energy(u, cfg, well), expected) < 1e-12);
}
