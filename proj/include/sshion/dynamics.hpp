#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sshion/lattice.hpp"

namespace sshion {

struct QuenchResult {
  std::vector<double> times;
  std::vector<double> survival;  // P(t) = |c_1(t)|^4
  double long_time_average = 0.0;
  std::optional<double> xi_loc_used;
  double max_norm_error = 0.0;  // max_t |sum_j |c_j(t)|^2 - 1|
};

/// c_j(t) = sum_n exp(-2 i e_n t) M_{j,n} M_{1,n} for an excitation started on site 1.
Eigen::VectorXcd single_excitation_amplitudes(const SpectralDecomposition& spec, double t);

/// Throws Error(domain) unless times are non-negative and ascending.
QuenchResult evolve_single_excitation(const SpectralDecomposition& spec,
                                      const std::vector<double>& times);

/// Infinite-time limit (sum_c w_c^2)^2, where w_c is the weight of site 1 on
/// the eigenspace c. Levels closer than cluster_tolerance * max|e| form one
/// eigenspace; without degeneracies this is (sum_n M_{1,n}^4)^2.
double long_time_survival(const SpectralDecomposition& spec, double cluster_tolerance = 1e-9);

/// (time average of |c_1(t)|^2)^2 over t in [10, 100] / |delta0| (uniform grid).
double dephased_survival(const SpectralDecomposition& spec, double delta0, int samples = 200);

struct SurvivalPoint {
  double xi_loc;
  double p;
};

struct SurvivalFit {
  // Free exponent: P = (c1 xi^(-beta/2) + c2 / N)^2.
  double beta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double rms = 0.0;  // relative residual of sqrt(P)
  // Fixed exponent, P = (c1 / xi^2 + c2 / N)^2.
  double c1_fixed = 0.0;
  double c2_fixed = 0.0;
  // Slope of ln P against ln xi, no finite-size floor.
  double beta_loglog = 0.0;
  double inv_xi_min = 0.0;
  double inv_xi_max = 0.0;
};

/// Throws Error(fit) with fewer than 5 points, non-positive data, or a xi
/// spread below a factor 3.
SurvivalFit fit_survival_power_law(const std::vector<SurvivalPoint>& points, int n_sites);

}  // namespace sshion
