#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sshion/bessel.hpp"
#include "sshion/couplings.hpp"
#include "sshion/errors.hpp"

using namespace sshion;

namespace {

constexpr double kPi = std::numbers::pi;

// (1/pi) int_0^pi cos(x sin t) dt; the trapezoid rule is spectrally accurate
// for this periodic integrand.
double j0_quadrature(double x) {
  const int n = 400;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::cos(x * std::sin(kPi * i / n));
  return s / n;
}

CouplingModel model_with(double eta, double phi = 0.75 * kPi) {
  CouplingModel m;
  m.eta = eta;
  m.phi = phi;
  return m;
}

}  // namespace

TEST_CASE("bessel_j0 against quadrature and the standard library") {
  for (double x = 0.0; x <= 10.0; x += 0.125) {
    CHECK(std::fabs(bessel_j0(x) - j0_quadrature(x)) < 1e-12);
    CHECK(std::fabs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
  }
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j0(-2.5) == doctest::Approx(bessel_j0(2.5)).epsilon(1e-15));
  for (double x : {11.9, 12.1, 20.0, 55.5}) {
    CHECK(std::fabs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-10);
  }
}

TEST_CASE("interaction constants") {
  CouplingModel m;
  m.delta_band = 4.0;
  const auto c = interaction_constants(m);
  CHECK(c.xi_int == doctest::Approx(std::sqrt(std::numbers::ln2 / 2.0) * 0.5).epsilon(1e-14));
  CHECK(c.xi_int == doctest::Approx(0.2943).epsilon(1e-3));
}

TEST_CASE("bare couplings") {
  CouplingModel m;
  SUBCASE("dipolar tail decays monotonically") {
    m.coupling_form = CouplingForm::dipolar_only;
    double prev = std::fabs(bare_coupling_at(m, 1));
    for (int d = 2; d < 200; ++d) {
      const double cur = std::fabs(bare_coupling_at(m, d));
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(bare_coupling_at(m, 3) == doctest::Approx(bare_coupling_at(m, 1) / 27.0).epsilon(1e-14));
  }
  SUBCASE("nearest-neighbour truncation") {
    m.coupling_form = CouplingForm::nearest_neighbor;
    CHECK(bare_coupling_at(m, 2) == 0.0);
    CHECK(bare_coupling_at(m, 7) == 0.0);
    CouplingModel full;
    CHECK(bare_coupling_at(m, 1) == bare_coupling_at(full, 1));
  }
  SUBCASE("analytic form is the sum of its limits") {
    CouplingModel e = m, d = m;
    e.coupling_form = CouplingForm::exponential_only;
    d.coupling_form = CouplingForm::dipolar_only;
    for (int k = 1; k < 10; ++k) {
      CHECK(bare_coupling_at(m, k) ==
            doctest::Approx(bare_coupling_at(e, k) + bare_coupling_at(d, k)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(bare_coupling_at(m, 0), Error);
  CHECK(bare_coupling(m, 3, 7) == bare_coupling_at(m, 4));
}

TEST_CASE("bessel dressing") {
  CHECK(bessel_dressing(model_with(0.0), 3, 8) == 1.0);
  CHECK(std::fabs(bessel_dressing(model_with(0.9), 2, 3) - 1.0) < 1e-15);
  const CouplingModel m = model_with(0.62);
  CHECK(bessel_dressing(m, 1, 2) == doctest::Approx(0.818).epsilon(2e-3));
  CHECK(bessel_dressing(m, 1, 2) == doctest::Approx(bessel_j0(std::sqrt(2.0) * 0.62)).epsilon(1e-14));
  // Period two in the bond position, symmetric in its ends.
  for (int j = 1; j < 20; ++j) {
    for (int d = 1; d < 9; ++d) {
      CHECK(std::fabs(bessel_dressing(m, j, j + d) - bessel_dressing(m, j + 2, j + 2 + d)) < 4e-15);
      CHECK(bessel_dressing(m, j, j + d) == bessel_dressing(m, j + d, j));
    }
  }
}

TEST_CASE("coupling matrix") {
  SUBCASE("two sites by hand") {
    CouplingModel m = model_with(0.4, 1.0);
    m.n_sites = 2;
    const CouplingMatrix h = build_coupling_matrix(m);
    const double expect = bare_coupling_at(m, 1) * bessel_j0(std::sqrt(2.0) * 0.4 * std::sin(0.75 * kPi + 1.0));
    CHECK(h(1, 2) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(h(1, 1) == 0.0);
    CHECK(h(2, 2) == 0.0);
  }
  SUBCASE("no drive gives bare couplings") {
    CouplingModel m = model_with(0.0);
    m.n_sites = 30;
    const CouplingMatrix h = build_coupling_matrix(m);
    for (int j = 1; j <= 30; ++j) {
      for (int l = j + 1; l <= 30; ++l) CHECK(h(j, l) == bare_coupling(m, j, l));
    }
  }
  SUBCASE("symmetric for random models") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      CouplingModel m = model_with(1.5 * u(rng), kPi * u(rng));
      m.n_sites = 25;
      m.delta_band = 0.1 + 8.0 * u(rng);
      const CouplingMatrix h = build_coupling_matrix(m);
      CHECK((h.entries - h.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("range truncation") {
    CouplingModel m = model_with(0.3);
    m.n_sites = 12;
    const CouplingMatrix t = truncate_range(build_coupling_matrix(m), 2);
    CHECK(t(1, 3) != 0.0);
    CHECK(t(1, 4) == 0.0);
  }
  SUBCASE("only kd = pi/2 is covered") {
    CouplingModel m;
    m.kd = 1.0;
    CHECK_THROWS_AS(build_coupling_matrix(m), Error);
  }
}

TEST_CASE("dimerization") {
  CHECK(dimerization(model_with(0.0)) == 0.0);
  const double b = bessel_j0(std::sqrt(2.0) * 0.62);
  CHECK(dimerization(model_with(0.62)) == doctest::Approx((1.0 - b) / (1.0 + b)).epsilon(1e-13));
  CHECK(dimerization(model_with(0.62)) == doctest::Approx(0.1).epsilon(0.02));
  CHECK(dimerization(model_with(0.62, 0.25 * kPi)) == doctest::Approx(-0.1).epsilon(0.02));

  const double eta = eta_for_dimerization(model_with(0.0), 0.1);
  CHECK(eta == doctest::Approx(0.62).epsilon(0.01));
  CHECK(dimerization(model_with(eta)) == doctest::Approx(0.1).epsilon(1e-10));
  CHECK_THROWS_AS(eta_for_dimerization(model_with(0.0, 0.5 * kPi), 0.1), Error);
}

TEST_CASE("standing-wave tilt") {
  CHECK(standing_wave_tilt(320e-9, 10e-6) == doctest::Approx(0.458).epsilon(1e-3));
  CHECK(standing_wave_tilt(4.0, 1.0) == doctest::Approx(90.0).epsilon(1e-14));
  CHECK(standing_wave_tilt(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(standing_wave_tilt(5.0, 1.0), Error);
}

TEST_CASE("model validation") {
  CouplingModel m;
  m.phi = -1.0;
  CHECK_THROWS_AS(m.validate(), Error);
  m.phi = 0.5;
  m.n_sites = 1;
  CHECK_THROWS_AS(m.validate(), Error);
  CHECK(coupling_form_from_string("nearest_neighbor") == CouplingForm::nearest_neighbor);
  CHECK_THROWS_AS(coupling_form_from_string("cubic"), Error);
}
