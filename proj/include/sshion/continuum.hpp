#pragma once

#include <complex>
#include <utility>

#include "sshion/couplings.hpp"

namespace sshion {

/// Effective low-energy parameters at k_F = pi/2.
struct ContinuumParams {
  double v_f = 0.0;
  double delta0 = 0.0;
  double xi_pred = 0.0;  // |v_f / delta0|
  int d_max = 0;         // last distance summed term by term
  double tail_bound = 0.0;
};

/// Series value together with its truncation diagnostics.
template <class T>
struct SeriesSum {
  T value{};
  int d_max = 0;
  double tail_bound = 0.0;  // magnitude of the first omitted term
};

/// (J+_d, J-_d) = ((J_even + J_odd) / 2, (J_even - J_odd) / 2), with J_even the
/// dressing of the bond (j, j + d) for even j.
std::pair<double, double> symmetric_dressings(const CouplingModel& model, int d);

/// eps'(k) = 4 sum_d J_d J+_d cos(k d)
SeriesSum<double> dispersion_series(const CouplingModel& model, double k);
double dispersion(const CouplingModel& model, double k);

/// Delta'(k) = 2 sum_d J_d J-_d exp(i k d)
SeriesSum<std::complex<double>> scattering_series(const CouplingModel& model, double k);
std::complex<double> scattering(const CouplingModel& model, double k);

/// -4 sum_d J_d J+_d d sin(k d), truncated like dispersion_series.
double dispersion_slope(const CouplingModel& model, double k);

/// v_F and Delta0 with the dipolar tail summed in closed form (Hurwitz zeta
/// over the period-8 residue classes). Throws Error(gapless) when Delta0 = 0.
ContinuumParams effective_params(const CouplingModel& model);

}  // namespace sshion
