#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sshion/couplings.hpp"
#include "sshion/errors.hpp"
#include "sshion/lattice.hpp"
#include "sshion/topology.hpp"

using namespace sshion;

namespace {

constexpr double kPi = std::numbers::pi;

CouplingModel model(double eta, double phi = 0.75 * kPi, double band = 4.0) {
  CouplingModel m;
  m.eta = eta;
  m.phi = phi;
  m.delta_band = band;
  return m;
}

double dressed(const CouplingModel& m, int j, int l) {
  return bare_coupling_at(m, std::abs(j - l)) * bessel_dressing(m, j, l);
}

// Bloch matrix summed cell by cell: H_ab(k) = sum_n h(a_0, b_n) e^{i k n}.
Eigen::Matrix2cd assembled(const CouplingModel& m, double k, int range) {
  Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
  for (int n = -range; n <= range; ++n) {
    const std::complex<double> ph = std::polar(1.0, k * n);
    if (n != 0) {
      h(0, 0) += dressed(m, 1, 1 + 2 * n) * ph;
      h(1, 1) += dressed(m, 2, 2 + 2 * n) * ph;
    }
    h(0, 1) += dressed(m, 1, 2 + 2 * n) * ph;
  }
  h(1, 0) = std::conj(h(0, 1));
  return h;
}

}  // namespace

TEST_CASE("Bloch blocks match direct assembly") {
  for (int cells : {2, 8}) {
    const CouplingModel m = model(0.5, 1.1);
    const BlochHamiltonian b = build_bloch(m, cells);
    CHECK(b.range_cells > 2);
    for (int mu = 0; mu < cells; ++mu) {
      const Eigen::Matrix2cd ref = assembled(m, 2.0 * kPi * mu / cells, b.range_cells);
      CHECK((b.block(mu) - ref).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
  CHECK_THROWS_AS(build_bloch(model(0.5), 1), Error);
}

TEST_CASE("chiral limits") {
  CouplingModel nn = model(0.62);
  nn.coupling_form = CouplingForm::nearest_neighbor;
  CHECK(build_bloch(nn, 64).d.col(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(chirality_defect(build_bloch(model(0.62, 0.25 * kPi), 64)) < 1e-12);
  CHECK(chirality_defect(build_bloch(model(0.62, 0.75 * kPi), 64)) < 1e-12);
  CHECK(chirality_defect(build_bloch(model(0.62, 0.5 * kPi), 64)) > 1e-6);
}

TEST_CASE("undriven chain is gapless at the zone boundary") {
  const BlochHamiltonian b = build_bloch(model(0.0), 64);
  CHECK(b.d.row(32).norm() < 1e-12);
  try {
    zak_phase(b);
    FAIL("expected a gapless error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::gapless);
  }
}

TEST_CASE("Zak phase in the two chiral limits") {
  const ZakResult topo = zak_phase(build_bloch(model(0.62), 256));
  CHECK(topo.quantized);
  CHECK(std::fabs(std::fabs(topo.nu) - kPi) < 1e-9);
  CHECK(topo.gap_min > 0.0);
  const ZakResult triv = zak_phase(build_bloch(model(0.62, 0.25 * kPi), 256));
  CHECK(triv.quantized);
  CHECK(std::fabs(triv.nu) < 1e-9);
}

TEST_CASE("Berry phase is gauge invariant") {
  auto states = lower_band_states(build_bloch(model(0.4, 0.75 * kPi, 0.5), 128));
  const double nu = berry_phase(states);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (auto& u : states) u *= std::polar(1.0, phase(rng));
  CHECK(std::fabs(berry_phase(states) - nu) < 1e-12);
}

TEST_CASE("lower-band states are normalized eigenvectors") {
  const BlochHamiltonian b = build_bloch(model(0.7, 2.0), 32);
  const auto states = lower_band_states(b);
  for (int mu = 0; mu < 32; ++mu) {
    const Eigen::Vector2cd& u = states[mu];
    const double e = b.d0(mu) - b.d.row(mu).norm();
    CHECK(std::fabs(u.norm() - 1.0) < 1e-14);
    CHECK((b.block(mu) * u - e * u).norm() < 1e-12);
  }
}

TEST_CASE("Zak phase converges in the grid size") {
  const CouplingModel m = model(0.3, 0.75 * kPi, 1.0);
  const double a = zak_phase(build_bloch(m, 64)).nu;
  const double b = zak_phase(build_bloch(m, 128)).nu;
  const double c = zak_phase(build_bloch(m, 256)).nu;
  CHECK(std::fabs(a - c) < 1e-6);
  CHECK(std::fabs(b - c) < 1e-6);
}

TEST_CASE("bulk-edge correspondence") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    // eta >= 0.45 keeps xi_loc well below N / 2.
    const double eta = 0.45 + 0.45 * u(rng);
    const double band = 0.5 + 7.5 * u(rng);
    CouplingModel m = model(eta, trial % 2 == 0 ? 0.75 * kPi : 0.25 * kPi, band);
    const ZakResult z = zak_phase(build_bloch(m, 256));
    REQUIRE(z.quantized);
    m.n_sites = 100;
    const EdgeStateReport r = find_edge_states(diagonalize(build_coupling_matrix(m)));
    CHECK((std::fabs(z.nu) > 1.0) == r.topological());
    ++checked;
  }
  CHECK(checked == 20);
}
