#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sshion/couplings.hpp"
#include "sshion/errors.hpp"
#include "sshion/lattice.hpp"

using namespace sshion;

namespace {

constexpr double kPi = std::numbers::pi;

CouplingModel chain(int n, double eta, double phi = 0.75 * kPi, double band = 4.0) {
  CouplingModel m;
  m.n_sites = n;
  m.eta = eta;
  m.phi = phi;
  m.delta_band = band;
  return m;
}

// Nearest-neighbour chain with alternating bonds a, b, a, ...
Eigen::MatrixXd alternating(int n, double a, double b) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) h(j, j + 1) = h(j + 1, j) = (j % 2 == 0) ? a : b;
  return h;
}

}  // namespace

TEST_CASE("diagonalize small cases") {
  SUBCASE("two sites") {
    Eigen::MatrixXd h(2, 2);
    h << 0.0, 0.7, 0.7, 0.0;
    const auto s = diagonalize(h);
    CHECK(s.energies(0) == doctest::Approx(-0.7));
    CHECK(s.energies(1) == doctest::Approx(0.7));
    CHECK(std::fabs(std::fabs(s.modes(0, 0)) - std::sqrt(0.5)) < 1e-14);
    CHECK(s.modes(0, 1) * s.modes(1, 1) > 0.0);
    CHECK(s.modes(0, 0) * s.modes(1, 0) < 0.0);
  }
  SUBCASE("uniform four-site chain") {
    const double j = 0.37;
    const auto s = diagonalize(alternating(4, j, j));
    for (int k = 1; k <= 4; ++k) {
      CHECK(s.energies(4 - k) == doctest::Approx(2.0 * j * std::cos(k * kPi / 5.0)).epsilon(1e-14));
    }
  }
  SUBCASE("random symmetric matrix") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k) a(i, k) = g(rng);
    const Eigen::MatrixXd h = a + a.transpose();
    const auto s = diagonalize(h);
    CHECK(eigen_residual(h, s) < 1e-12);
    CHECK(orthonormality_error(s) < 1e-12);
    for (int i = 1; i < 8; ++i) CHECK(s.energies(i) >= s.energies(i - 1));
  }
  SUBCASE("non-finite input") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(0, 1) = h(1, 0) = NAN;
    CHECK_THROWS_AS(diagonalize(h), Error);
  }
}

TEST_CASE("edge states of the driven chain") {
  const auto spec = diagonalize(build_coupling_matrix(chain(100, 0.62)));
  const EdgeStateReport r = analyze_edge(spec);
  REQUIRE(r.topological());
  CHECK(r.midgap_indices.size() == 2);
  CHECK(r.edge_side == EdgeSide::left);
  CHECK(r.sublattice_purity > 0.95);
  CHECK(r.profile.head(20).squaredNorm() > 0.95);
  for (double e : r.midgap_energies) {
    CHECK(e > r.gap_lower);
    CHECK(e < r.gap_upper);
  }
  REQUIRE(r.xi_loc);
  CHECK(*r.xi_loc > 1.0);
  CHECK(*r.xi_loc < 20.0);

  const EdgeStateReport trivial = analyze_edge(diagonalize(build_coupling_matrix(chain(100, 0.62, 0.25 * kPi))));
  CHECK_FALSE(trivial.topological());
  CHECK(trivial.gap() > 0.0);
  CHECK_FALSE(trivial.xi_loc);
}

TEST_CASE("decoupled end site") {
  const auto spec = diagonalize(alternating(20, 0.0, 1.0));
  const EdgeStateReport r = find_edge_states(spec);
  REQUIRE(r.topological());
  CHECK(r.edge_side == EdgeSide::left);
  CHECK(std::fabs(std::fabs(r.profile(0)) - 1.0) < 1e-12);
  CHECK(r.sublattice_purity == doctest::Approx(1.0));
  try {
    fit_localization_length(spec, r);
    FAIL("expected a fit error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::fit);
  }
  CHECK_FALSE(analyze_edge(spec).xi_loc);
}

TEST_CASE("nearest-neighbour localization length") {
  CHECK(ssh_localization_length(0.1) == doctest::Approx(-2.0 / std::log(0.9 / 1.1)).epsilon(1e-14));
  CHECK(ssh_localization_length(0.1) == doctest::Approx(9.97).epsilon(1e-3));
  const double delta = 0.1;
  const auto spec = diagonalize(alternating(200, 1.0 - delta, 1.0 + delta));
  const auto r = find_edge_states(spec);
  const LocalizationFit fit = fit_localization_length(spec, r);
  CHECK(fit.xi_loc == doctest::Approx(ssh_localization_length(delta)).epsilon(1e-3));
  CHECK(fit.n_points >= 4);
  CHECK(fit.first_site % 2 == 1);
}

TEST_CASE("localization length shrinks with dimerization") {
  double prev = INFINITY;
  for (double delta : {0.1, 0.2, 0.3, 0.4}) {
    CouplingModel m = chain(100, 0.0, 0.75 * kPi, 1.0);
    m.eta = eta_for_dimerization(m, delta);
    const auto r = analyze_edge(diagonalize(build_coupling_matrix(m)));
    REQUIRE(r.xi_loc);
    CHECK(*r.xi_loc < prev);
    prev = *r.xi_loc;
  }
}

TEST_CASE("longer range gives shorter localization length") {
  auto xi = [](CouplingForm form, double band) {
    CouplingModel m = chain(100, 0.0, 0.75 * kPi, band);
    m.coupling_form = form;
    m.eta = eta_for_dimerization(m, 0.1);
    return analyze_edge(diagonalize(build_coupling_matrix(m))).xi_loc.value();
  };
  CHECK(xi(CouplingForm::analytic, 0.1) < xi(CouplingForm::nearest_neighbor, 0.1));
}
