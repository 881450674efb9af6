#include "sshion/couplings.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "sshion/bessel.hpp"
#include "sshion/errors.hpp"

namespace sshion {
namespace {

constexpr double kZeta3 = 1.2020569031595943;

void require_half_pi(const CouplingModel& model) {
  if (std::fabs(model.kd - std::numbers::pi / 2.0) > 1e-12) {
    fail(ErrorKind::unsupported,
         "periodic dressing requires kd = pi/2, got kd = " + std::to_string(model.kd));
  }
}

}  // namespace

std::string_view to_string(CouplingForm form) noexcept {
  switch (form) {
    case CouplingForm::analytic: return "analytic";
    case CouplingForm::exponential_only: return "exponential_only";
    case CouplingForm::dipolar_only: return "dipolar_only";
    case CouplingForm::nearest_neighbor: return "nearest_neighbor";
  }
  return "analytic";
}

CouplingForm coupling_form_from_string(std::string_view name) {
  if (name == "analytic") return CouplingForm::analytic;
  if (name == "exponential_only") return CouplingForm::exponential_only;
  if (name == "dipolar_only") return CouplingForm::dipolar_only;
  if (name == "nearest_neighbor") return CouplingForm::nearest_neighbor;
  fail(ErrorKind::config, "unknown coupling_form '" + std::string(name) + "'");
}

void CouplingModel::validate() const {
  if (n_sites < 2) fail(ErrorKind::domain, "n_sites must be >= 2");
  if (!(g > 0.0)) fail(ErrorKind::domain, "g must be positive");
  if (!(t_c > 0.0)) fail(ErrorKind::domain, "t_c must be positive");
  if (!(delta_band > 0.0)) fail(ErrorKind::domain, "delta_band must be positive");
  if (!(eta >= 0.0)) fail(ErrorKind::domain, "eta must be non-negative");
  if (!(phi >= 0.0 && phi <= std::numbers::pi + 1e-12)) {
    fail(ErrorKind::domain, "phi must lie in [0, pi]");
  }
}

InteractionConstants interaction_constants(const CouplingModel& model) {
  const double ln2 = std::numbers::ln2;
  const double g2 = model.g * model.g;
  InteractionConstants c{};
  c.xi_int = std::sqrt(ln2 / 2.0) * std::sqrt(model.t_c / model.delta_band);
  c.j_exp = c.xi_int * g2 / (model.t_c * ln2);
  const double shifted = model.delta_band + 7.0 * kZeta3 * model.t_c / 4.0;
  c.j_dip = g2 * model.t_c / (2.0 * shifted * shifted);
  return c;
}

double bare_coupling_at(const CouplingModel& model, int distance) {
  if (distance < 1) fail(ErrorKind::domain, "no self-coupling");
  const auto c = interaction_constants(model);
  const double d = distance;
  // Yukawa term carries the factor -(-1)^d.
  const double yukawa = (distance % 2 == 0 ? -1.0 : 1.0) * c.j_exp * std::exp(-d / c.xi_int);
  const double dipolar = c.j_dip / (d * d * d);
  switch (model.coupling_form) {
    case CouplingForm::analytic: return yukawa + dipolar;
    case CouplingForm::exponential_only: return yukawa;
    case CouplingForm::dipolar_only: return dipolar;
    case CouplingForm::nearest_neighbor: return distance == 1 ? yukawa + dipolar : 0.0;
  }
  return 0.0;
}

double bare_coupling(const CouplingModel& model, int j, int l) {
  if (j == l) fail(ErrorKind::domain, "no self-coupling");
  return bare_coupling_at(model, std::abs(j - l));
}

double bessel_dressing(const CouplingModel& model, int j, int l) {
  require_half_pi(model);
  const double quarter = std::numbers::pi / 4.0;
  const double arg =
      2.0 * model.eta * std::sin(quarter * (j + l) + model.phi) * std::sin(quarter * (j - l));
  return bessel_j0(arg);
}

CouplingMatrix build_coupling_matrix(const CouplingModel& model) {
  model.validate();
  require_half_pi(model);
  const int n = model.n_sites;
  CouplingMatrix m{Eigen::MatrixXd::Zero(n, n)};
  for (int d = 1; d < n; ++d) {
    const double bare = bare_coupling_at(model, d);
    if (bare == 0.0) continue;
    for (int j = 1; j + d <= n; ++j) {
      const double h = bare * bessel_dressing(model, j, j + d);
      m.entries(j - 1, j + d - 1) = h;
      m.entries(j + d - 1, j - 1) = h;
    }
  }
  return m;
}

CouplingMatrix truncate_range(const CouplingMatrix& matrix, int max_distance) {
  CouplingMatrix out = matrix;
  const int n = matrix.n_sites();
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (std::abs(j - l) > max_distance) out.entries(j, l) = 0.0;
    }
  }
  return out;
}

double dimerization(const CouplingModel& model) {
  const double weak = bessel_dressing(model, 1, 2);
  const double strong = bessel_dressing(model, 2, 3);
  const double denom = strong + weak;
  if (std::fabs(denom) < 1e-12) {
    fail(ErrorKind::degenerate, "dimerization undefined: J_12 + J_23 vanishes");
  }
  return (strong - weak) / denom;
}

double eta_for_dimerization(CouplingModel model, double target, double eta_lo, double eta_hi) {
  auto residual = [&](double eta) {
    model.eta = eta;
    return dimerization(model) - target;
  };
  const double f_lo = residual(eta_lo);
  const double f_hi = residual(eta_hi);
  if (f_lo == 0.0) return eta_lo;
  if (f_hi == 0.0) return eta_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    fail(ErrorKind::domain, "target dimerization not bracketed by the eta interval");
  }
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      residual, eta_lo, eta_hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50),
      max_iter);
  return 0.5 * (a + b);
}

double standing_wave_tilt(double wavelength, double spacing) {
  if (!(spacing > 0.0)) fail(ErrorKind::domain, "ion spacing must be positive");
  const double s = wavelength / (4.0 * spacing);
  if (s < 0.0 || s > 1.0) {
    fail(ErrorKind::domain, "infeasible geometry: lambda / (4 d0) exceeds 1");
  }
  return std::asin(s) * 180.0 / std::numbers::pi;
}

double max_bare_coupling(const CouplingModel& model) {
  double best = 0.0;
  for (int d = 1; d < model.n_sites; ++d) {
    best = std::max(best, std::fabs(bare_coupling_at(model, d)));
  }
  return best;
}

}  // namespace sshion
