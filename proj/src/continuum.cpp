#include "sshion/continuum.hpp"

#include <array>
#include <cmath>
#include <gsl/gsl_sf_zeta.h>
#include <numbers>

#include "sshion/errors.hpp"

namespace sshion {
namespace {

constexpr int kSeriesCap = 10000;
constexpr double kRelativeTail = 1e-10;

// Upper bound on sum_{d > D} |J_d|.
double coupling_tail(const CouplingModel& model, int D) {
  const auto c = interaction_constants(model);
  const double exp_tail = c.j_exp * std::exp(-(D + 1) / c.xi_int) / (1.0 - std::exp(-1.0 / c.xi_int));
  const double dip_tail = c.j_dip / (2.0 * double(D) * D);
  switch (model.coupling_form) {
    case CouplingForm::analytic: return exp_tail + dip_tail;
    case CouplingForm::exponential_only: return exp_tail;
    case CouplingForm::dipolar_only: return dip_tail;
    case CouplingForm::nearest_neighbor: return 0.0;
  }
  return 0.0;
}

// Sums prefactor * sum_d J_d term(d) for d = 1, 2, ... until the rigorous
// tail bound is negligible or the cap is reached.
template <class T, class Term>
SeriesSum<T> sum_series(const CouplingModel& model, double prefactor, Term term) {
  model.validate();
  SeriesSum<T> out;
  double scale = 0.0;
  int d = 1;
  for (; d <= kSeriesCap; ++d) {
    const double j = bare_coupling_at(model, d);
    out.value += prefactor * j * term(d);
    scale += prefactor * std::fabs(j);
    if (prefactor * coupling_tail(model, d) < kRelativeTail * scale) {
      ++d;
      break;
    }
  }
  out.d_max = d - 1;
  out.tail_bound = prefactor * std::fabs(bare_coupling_at(model, d));
  if (out.tail_bound > kRelativeTail * scale) {
    fail(ErrorKind::numerical, "coupling series not converged at d_max = " + std::to_string(out.d_max));
  }
  return out;
}

double hurwitz_zeta(double s, double a) { return gsl_sf_hzeta(s, a); }

}  // namespace

std::pair<double, double> symmetric_dressings(const CouplingModel& model, int d) {
  if (d < 1) fail(ErrorKind::domain, "distance must be >= 1");
  const double even = bessel_dressing(model, 2, 2 + d);
  const double odd = bessel_dressing(model, 1, 1 + d);
  return {0.5 * (even + odd), 0.5 * (even - odd)};
}

SeriesSum<double> dispersion_series(const CouplingModel& model, double k) {
  if (!(std::fabs(k) <= std::numbers::pi)) fail(ErrorKind::domain, "k must lie in [-pi, pi]");
  return sum_series<double>(model, 4.0, [&](int d) {
    return symmetric_dressings(model, d).first * std::cos(k * d);
  });
}

double dispersion(const CouplingModel& model, double k) { return dispersion_series(model, k).value; }

SeriesSum<std::complex<double>> scattering_series(const CouplingModel& model, double k) {
  if (!(std::fabs(k) <= std::numbers::pi)) fail(ErrorKind::domain, "k must lie in [-pi, pi]");
  return sum_series<std::complex<double>>(model, 2.0, [&](int d) {
    return symmetric_dressings(model, d).second * std::polar(1.0, k * d);
  });
}

std::complex<double> scattering(const CouplingModel& model, double k) {
  return scattering_series(model, k).value;
}

double dispersion_slope(const CouplingModel& model, double k) {
  const int d_max = dispersion_series(model, k).d_max;
  double slope = 0.0;
  for (int d = 1; d <= d_max; ++d) {
    slope -= 4.0 * bare_coupling_at(model, d) * symmetric_dressings(model, d).first * d * std::sin(k * d);
  }
  return slope;
}

ContinuumParams effective_params(const CouplingModel& model) {
  model.validate();
  const auto c = interaction_constants(model);
  ContinuumParams out;

  // sin(pi d / 2) vanishes for even d; only odd residues mod 8 survive.
  auto parity = [](int d) { return (d % 4 == 1) ? 1.0 : (d % 4 == 3 ? -1.0 : 0.0); };

  if (model.coupling_form == CouplingForm::nearest_neighbor) {
    const auto [plus, minus] = symmetric_dressings(model, 1);
    const double j1 = bare_coupling_at(model, 1);
    out.v_f = -4.0 * j1 * plus;
    out.delta0 = 4.0 * j1 * minus;
    out.d_max = 1;
  } else {
    if (model.coupling_form != CouplingForm::dipolar_only) {
      const double floor = 1e-20 * (c.j_exp + c.j_dip);
      int d = 1;
      for (; d <= kSeriesCap; ++d) {
        const double mag = c.j_exp * std::exp(-d / c.xi_int);
        if (d * mag < floor) break;
        const double yukawa = (d % 2 == 0 ? -1.0 : 1.0) * mag;
        const auto [plus, minus] = symmetric_dressings(model, d);
        out.v_f -= 4.0 * yukawa * plus * d * parity(d);
        out.delta0 += 4.0 * yukawa * minus * parity(d);
      }
      out.d_max = d - 1;
      out.tail_bound = 4.0 * d * c.j_exp * std::exp(-d / c.xi_int);
    }
    if (model.coupling_form != CouplingForm::exponential_only) {
      for (int r : {1, 3, 5, 7}) {
        const auto [plus, minus] = symmetric_dressings(model, r);
        const double a = r / 8.0;
        out.v_f -= 4.0 * c.j_dip * plus * parity(r) * hurwitz_zeta(2.0, a) / 64.0;
        out.delta0 += 4.0 * c.j_dip * minus * parity(r) * hurwitz_zeta(3.0, a) / 512.0;
      }
    }
  }

  if (!(std::fabs(out.delta0) > 1e-14 * std::fabs(out.v_f))) {
    fail(ErrorKind::gapless, "effective gap Delta0 vanishes");
  }
  out.xi_pred = std::fabs(out.v_f / out.delta0);
  return out;
}

}  // namespace sshion
