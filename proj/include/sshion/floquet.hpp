#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sshion/couplings.hpp"

namespace sshion {

/// Driven Ising chain H = sum_{j<l} 2 J_{jl} sx_j sx_l + (Omega/2) sum_j sz_j
/// plus the standing-wave drive, with Omega = base.omega_rabi and
/// omega_d = base.omega_drive. Bit j-1 of a basis index is site j (set = up).
struct DrivenModel {
  CouplingModel base;
  bool include_anomalous = true;  // keep s+s+ and s-s- terms
  double integrator_step = 0.0;   // largest step; 0 selects period / 40
  double rel_tolerance = 1e-10;
  double abs_tolerance = 1e-12;

  /// Omega and omega_d expressed as multiples of max|J|.
  static DrivenModel with_ratios(CouplingModel base, double omega_over_j, double drive_over_j);

  double max_coupling() const { return max_bare_coupling(base); }
  double drive_period() const;
  double max_step() const;
};

inline constexpr int kMaxDrivenSites = 10;

/// Frame angle Delta_j(t) = Omega t / 2 + (eta / 2) cos(pi j / 2 + phi) sin(omega_d t).
double frame_angle(const DrivenModel& model, int site, double t);

/// Phase exp(2 i (Delta_j - Delta_l)) carried by s+_j s-_l in the rotating frame.
std::complex<double> exchange_phase(const DrivenModel& model, int j, int l, double t);

/// Dense H'(t). Throws Error(resource) for N > 10.
Eigen::MatrixXcd rotating_frame_hamiltonian(const DrivenModel& model, double t);

/// H'(t) psi without forming the matrix.
Eigen::VectorXcd apply_rotating_frame(const DrivenModel& model, double t, const Eigen::VectorXcd& psi);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  std::size_t steps = 0;
  double max_norm_drift = 0.0;

  const Eigen::VectorXcd& final_state() const { return states.back(); }
};

/// Adaptive Dormand-Prince integration of i d/dt psi = H'(t) psi on [0, t_final].
/// Throws Error(numerical) when the norm drifts by more than 1e-6.
Trajectory integrate_schrodinger(const DrivenModel& model, const Eigen::VectorXcd& initial,
                                 double t_final);

/// exp(-i H_eff t) psi with H_eff the dressed exchange model on the full space.
Eigen::VectorXcd evolve_effective(const CouplingModel& model, const Eigen::VectorXcd& initial, double t);

struct FidelityReport {
  double fidelity = 1.0;
  double norm_drift = 0.0;
  std::size_t steps = 0;
  double max_j = 0.0;
  double omega_over_j = 0.0;
  double drive_over_j = 0.0;
  bool separated = true;  // omega_d and Omega both at least 10 max|J|
};

/// F = |<psi_driven(t)|psi_eff(t)>|^2.
FidelityReport effective_model_fidelity(const DrivenModel& model, const Eigen::VectorXcd& initial,
                                        double t_final);

/// Basis vector with one up spin on `site` (1-based).
Eigen::VectorXcd single_excitation_state(int n_sites, int site);

}  // namespace sshion
