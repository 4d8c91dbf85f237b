#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "nlslab/cutoff.hpp"
#include "nlslab/projections.hpp"
#include "nlslab/snapshot.hpp"
#include "test_util.hpp"

using namespace nlslab;
using namespace nlslab::testutil;

TEST_CASE("grid construction and frequency lattice") {
  GridSpec g = GridSpec::make(1, 8, M_PI);
  // L = pi gives the unit-spacing lattice {-4..3}.
  CHECK(g.axis_freq[0] == doctest::Approx(0.0));
  CHECK(g.axis_freq[1] == doctest::Approx(1.0));
  CHECK(g.axis_freq[3] == doctest::Approx(3.0));
  CHECK(g.axis_freq[4] == doctest::Approx(-4.0));
  CHECK(g.axis_freq[7] == doctest::Approx(-1.0));

  GridSpec g4 = GridSpec::make(4, 16, 8.0 * M_PI);
  CHECK(g4.size() == 65536);
  CHECK(g4.freq_step() == doctest::Approx(0.125));
  CHECK(g4.axis_freq[1] == doctest::Approx(0.125));

  CHECK_THROWS_AS(GridSpec::make(2, 7, 1.0), validation_error);
  CHECK_THROWS_AS(GridSpec::make(0, 8, 1.0), validation_error);
  CHECK_THROWS_AS(GridSpec::make(5, 8, 1.0), validation_error);
  CHECK_THROWS_AS(GridSpec::make(2, 8, 0.0), validation_error);
  CHECK_THROWS_AS(GridSpec::make(2, 4, 1.0), validation_error);
}

TEST_CASE("Parseval round trip to 1e-12") {
  for (int d = 1; d <= 3; ++d) {
    GridSpec g = GridSpec::make(d, d == 3 ? 16 : 64, 8.0 * M_PI);
    SpectralField f = random_band_field(g, 7 + d);
    double phys = l2_norm(f);
    double mode_sq = 0.0;
    for (const auto& z : f.modes()) mode_sq += std::norm(z);
    double spec = std::sqrt(mode_sq * g.volume());
    CHECK(rel_diff(phys, spec) < 1e-12);

    SpectralField back = SpectralField::from_modes(g, f.modes());
    CHECK(field_l2_diff(f, back) < 1e-12 * phys);
  }
}

TEST_CASE("dyadic projection: multiplier fixed points and completeness") {
  GridSpec g = GridSpec::make(2, 64, 8.0 * M_PI);

  SUBCASE("mode on the annulus center is unchanged") {
    SpectralField f = single_mode(g, {8, 0});  // |xi| = 1 = N
    SpectralField p = lp_project(f, 1.0);
    CHECK(field_l2_diff(f, p) < 1e-12 * l2_norm(f));
  }

  SUBCASE("zero field stays zero") {
    SpectralField z = SpectralField::zero(g);
    CHECK(l2_norm(lp_project(z, 1.0)) == 0.0);
  }

  SUBCASE("out-of-band N gives the zero field, flagged") {
    SpectralField f = random_band_field(g, 3);
    SpectralField p = lp_project(f, 4096.0);
    CHECK(l2_norm(p) == 0.0);
    REQUIRE(!p.notes().empty());
    CHECK(p.notes()[0].find("out-of-band") != std::string::npos);
  }

  SUBCASE("sum over resolvable N restores band-limited data") {
    SpectralField f = random_band_field(g, 11);
    SpectralField sum = SpectralField::zero(g);
    for (double n : dyadic_scales(g)) sum = add(sum, lp_project(f, n));
    CHECK(field_l2_diff(sum, f) < 1e-10 * l2_norm(f));
  }

  SUBCASE("fattened projection reproduces P_N") {
    SpectralField f = random_band_field(g, 13);
    for (double n : {0.25, 1.0, 4.0}) {
      SpectralField pn = lp_project(f, n);
      SpectralField fat =
          sub(lp_project_low(f, 8.0 * n), lp_project_low(f, n / 8.0));
      SpectralField both = lp_project(fat, n);
      CHECK(field_l2_diff(pn, both) < 1e-10 * std::max(1e-30, l2_norm(pn)));
    }
  }

  SUBCASE("annulus multiplier support") {
    for (double a : {0.1, 0.5, 2.0, 3.0}) {
      double mult = CutoffProfile::varphi(a) - CutoffProfile::varphi(2.0 * a);
      if (a <= 0.5 || a >= 2.0) CHECK(std::abs(mult) < 1e-15);
    }
    CHECK(CutoffProfile::varphi(1.0) - CutoffProfile::varphi(2.0) ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("unit-scale projections form a partition of unity") {
  GridSpec g = GridSpec::make(2, 32, 8.0 * M_PI);
  auto part = UnitPartition::get(g);

  SUBCASE("normalized psi sums to one at every lattice frequency") {
    std::vector<double> sums(g.size(), 0.0);
    for (std::size_t idx = 0; idx < part->lattice_size(); ++idx)
      for (const auto& [mode, w] : part->weights(idx)) sums[mode] += w;
    for (std::size_t i = 0; i < sums.size(); ++i) {
      CHECK(std::abs(sums[i] - 1.0) < 1e-10);
    }
  }

  SUBCASE("sum of unit projections restores the field") {
    SpectralField f = random_band_field(g, 17);
    SpectralField sum = SpectralField::zero(g);
    for (std::size_t idx = 0; idx < part->lattice_size(); ++idx) {
      if (part->weights(idx).empty()) continue;
      sum = add(sum, unit_project(f, part->lattice_point(idx)));
    }
    CHECK(field_l2_diff(sum, f) < 1e-10 * l2_norm(f));
  }

  SUBCASE("k outside the band yields zero, flagged") {
    SpectralField f = random_band_field(g, 19);
    SpectralField p = unit_project(f, {1000, 1000});
    CHECK(l2_norm(p) == 0.0);
    REQUIRE(!p.notes().empty());
  }

  SUBCASE("unit-scale Bernstein constant is k-independent") {
    SpectralField f = random_band_field(g, 23);
    double max_ratio = 0.0, min_ratio = 1e300;
    int counted = 0;
    for (std::size_t idx = 0; idx < part->lattice_size(); ++idx) {
      if (part->weights(idx).empty()) continue;
      SpectralField pk = unit_project(f, part->lattice_point(idx));
      double l2 = l2_norm(pk);
      if (l2 < 1e-8) continue;
      double ratio = lebesgue_norm(pk, 4.0) / l2;
      max_ratio = std::max(max_ratio, ratio);
      min_ratio = std::min(min_ratio, ratio);
      ++counted;
    }
    REQUIRE(counted > 20);
    CHECK(max_ratio / min_ratio < 50.0);
  }
}

TEST_CASE("directional projections and the composition identity") {
  GridSpec g = GridSpec::make(2, 64, 8.0 * M_PI);

  SUBCASE("mode with xi.e_l = N is unchanged") {
    SpectralField f = single_mode(g, {8, 3});  // xi_1 = 1
    SpectralField p = directional_project(f, 1.0, 1);
    CHECK(field_l2_diff(f, p) < 1e-12 * l2_norm(f));
  }

  SUBCASE("mode with xi.e_l = 0 vanishes") {
    SpectralField f = single_mode(g, {0, 5});
    SpectralField p = directional_project(f, 1.0, 1);
    CHECK(l2_norm(p) < 1e-14);
  }

  SUBCASE("bad axis rejected") {
    SpectralField f = single_mode(g, {1, 1});
    CHECK_THROWS_AS(directional_project(f, 1.0, 0), validation_error);
    CHECK_THROWS_AS(directional_project(f, 1.0, 3), validation_error);
  }

  SUBCASE("identity residual on random band data") {
    SpectralField f = random_band_field(g, 29);
    for (double n : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      SpectralField cur = lp_project(f, n);
      double base = l2_norm(cur);
      if (base == 0.0) continue;
      for (int ell = 1; ell <= g.d; ++ell)
        cur = sub(cur, directional_project(cur, n, ell));
      CHECK(l2_norm(cur) / base < 1e-10);
    }
  }

  SUBCASE("identity residual in d=4") {
    GridSpec g4 = GridSpec::make(4, 16, 8.0 * M_PI);
    SpectralField f = random_band_field(g4, 31);
    for (double n : {0.25, 1.0}) {
      SpectralField cur = lp_project(f, n);
      double base = l2_norm(cur);
      REQUIRE(base > 0.0);
      for (int ell = 1; ell <= 4; ++ell)
        cur = sub(cur, directional_project(cur, n, ell));
      CHECK(l2_norm(cur) / base < 1e-10);
    }
  }
}

TEST_CASE("sobolev norm") {
  GridSpec g = GridSpec::make(2, 64, 8.0 * M_PI);

  SUBCASE("s = 0 equals the L2 norm") {
    SpectralField f = random_band_field(g, 37);
    CHECK(rel_diff(sobolev_norm(f, 0.0), l2_norm(f)) < 1e-12);
  }

  SUBCASE("single unit mode gives the bracket weight") {
    SpectralField f = single_mode(g, {8, 0});  // |xi| = 1
    double expected = std::sqrt(2.0) * l2_norm(f);
    CHECK(rel_diff(sobolev_norm(f, 1.0), expected) < 1e-12);
  }

  SUBCASE("s = 1 matches L2 plus gradient by the i xi multiplier") {
    SpectralField f = random_band_field(g, 41);
    double l2 = l2_norm(f);
    double grad_sq = 0.0;
    for (const auto& comp : gradient(f)) {
      double n = l2_norm(comp);
      grad_sq += n * n;
    }
    double via_parts = std::sqrt(l2 * l2 + grad_sq);
    CHECK(rel_diff(sobolev_norm(f, 1.0), via_parts) < 1e-10);
  }
}

TEST_CASE("lebesgue norm") {
  GridSpec g = GridSpec::make(2, 32, 4.0);

  SUBCASE("constant field") {
    std::vector<cplx> vals(g.size(), cplx(0.7, 0.0));
    SpectralField f = SpectralField::from_values(g, std::move(vals));
    CHECK(rel_diff(lebesgue_norm(f, 2.0), 0.7 * std::sqrt(g.volume())) < 1e-12);
    CHECK(rel_diff(lebesgue_norm(f, std::numeric_limits<double>::infinity()),
                   0.7) < 1e-12);
  }

  SUBCASE("volume-normalized norms are ordered in r") {
    SpectralField f = gaussian_bump(g, 0.8);
    double vol = g.volume();
    double n1 = lebesgue_norm(f, 1.0) / vol;
    double n2 = lebesgue_norm(f, 2.0) / std::sqrt(vol);
    double ninf = lebesgue_norm(f, std::numeric_limits<double>::infinity());
    CHECK(n1 <= n2 * (1 + 1e-12));
    CHECK(n2 <= ninf * (1 + 1e-12));
  }
}

TEST_CASE("dyadic Bernstein ratios over two decades") {
  GridSpec g = GridSpec::make(1, 2048, 8.0 * M_PI);  // axis frequencies to 128
  SpectralField f = random_band_field(g, 43, 0.0, 100.0);
  double max_ratio = 0.0, min_ratio = 1e300;
  int bands = 0;
  for (double n : dyadic_scales(g)) {
    if (n < 0.25 || n > 64.0) continue;
    SpectralField pn = lp_project(f, n);
    double base = l2_norm(pn);
    if (base < 1e-10) continue;
    // r1 = 2, r2 = inf: ratio against N^{d/r1} with d = 1.
    double ratio = lebesgue_norm(pn, std::numeric_limits<double>::infinity()) /
                   (std::sqrt(n) * base);
    max_ratio = std::max(max_ratio, ratio);
    min_ratio = std::min(min_ratio, ratio);
    ++bands;
  }
  REQUIRE(bands >= 9);
  CHECK(max_ratio / min_ratio < 50.0);  // a single fitted C covers all scales
}

TEST_CASE("Bernstein L-infinity ratio finite in d=4") {
  GridSpec g = GridSpec::make(4, 16, 8.0 * M_PI);
  SpectralField f = random_band_field(g, 47);
  int checked = 0;
  for (double n : dyadic_scales(g)) {
    SpectralField pn = lp_project(f, n);
    double base = l2_norm(pn);
    if (base < 1e-10) continue;
    double ratio = lebesgue_norm(pn, std::numeric_limits<double>::infinity()) /
                   (n * n * base);  // N^{4/2}
    CHECK(std::isfinite(ratio));
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("NLSF snapshot round trip") {
  GridSpec g = GridSpec::make(2, 16, 2.0);
  SpectralField f = random_band_field(g, 53);
  auto path = std::filesystem::temp_directory_path() / "nlslab_test.nlsf";
  write_nlsf(path.string(), f, 1.25);
  NlsfSnapshot snap = read_nlsf(path.string());
  CHECK(snap.timestamp == 1.25);
  CHECK(snap.field.grid().d == 2);
  CHECK(snap.field.grid().m == 16);
  CHECK(snap.field.grid().half_len == 2.0);
  const auto& a = f.values();
  const auto& b = snap.field.values();
  bool exact = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    exact = exact && a[i] == b[i];
  CHECK(exact);

  // header check: magic bytes as specified
  std::ifstream in(path, std::ios::binary);
  unsigned char magic[4];
  in.read(reinterpret_cast<char*>(magic), 4);
  CHECK(magic[0] == 0x4E);
  CHECK(magic[1] == 0x4C);
  CHECK(magic[2] == 0x53);
  CHECK(magic[3] == 0x46);
  in.close();
  std::filesystem::remove(path);
}
