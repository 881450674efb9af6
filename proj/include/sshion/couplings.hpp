#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <string>
#include <string_view>

namespace sshion {

/// Which part of the phonon-mediated interaction to keep.
enum class CouplingForm {
  analytic,          // Yukawa exponential + dipolar tail
  exponential_only,  // long-range limit
  dipolar_only,      // short-range limit
  nearest_neighbor,  // analytic value at |j-l| = 1, zero beyond
};

std::string_view to_string(CouplingForm form) noexcept;
CouplingForm coupling_form_from_string(std::string_view name);

/// Physical and driving parameters of a trapped-ion chain.
///
/// Energies share one arbitrary scale; with g = t_c = 1 every energy is
/// measured in units of g^2/t_c. Sites are numbered 1..n_sites.
struct CouplingModel {
  int n_sites = 100;
  double g = 1.0;
  double t_c = 1.0;
  double delta_band = 4.0;  // detuning from the bottom of the phonon band
  double eta = 0.0;         // dimensionless driving strength
  double phi = 0.75 * std::numbers::pi;
  double kd = std::numbers::pi / 2.0;  // wave-vector times ion spacing
  double omega_rabi = 0.0;
  double omega_drive = 0.0;
  CouplingForm coupling_form = CouplingForm::analytic;

  /// Throws Error(domain) unless N >= 2 and g, t_c, delta_band > 0, eta >= 0,
  /// phi in [0, pi].
  void validate() const;

  /// g^2 / t_c, the energy unit used when reporting dimensionless values.
  double energy_unit() const { return g * g / t_c; }
};

/// Constants of the analytic spin-spin interaction.
struct InteractionConstants {
  double xi_int;  // Yukawa range in sites
  double j_exp;
  double j_dip;
};

InteractionConstants interaction_constants(const CouplingModel& model);

/// Bare ion-ion coupling at separation d >= 1 (depends only on |j - l|).
double bare_coupling_at(const CouplingModel& model, int distance);

/// Bare coupling between sites j and l (1-based). Throws on j == l.
double bare_coupling(const CouplingModel& model, int j, int l);

/// Bessel dressing factor of the (j, l) exchange for kd = pi/2.
/// Throws Error(unsupported) for any other kd.
double bessel_dressing(const CouplingModel& model, int j, int l);

/// Dense symmetric N x N matrix of dressed couplings h_{j,l}, zero diagonal.
/// Element (j-1, l-1) holds h_{j,l}.
struct CouplingMatrix {
  Eigen::MatrixXd entries;

  int n_sites() const { return static_cast<int>(entries.rows()); }
  double operator()(int j, int l) const { return entries(j - 1, l - 1); }
};

CouplingMatrix build_coupling_matrix(const CouplingModel& model);

/// Keeps only entries with |j - l| <= max_distance.
CouplingMatrix truncate_range(const CouplingMatrix& matrix, int max_distance);

/// Relative difference of the two nearest-neighbour dressings,
/// (J_23 - J_12) / (J_23 + J_12). Positive in the topological phase at phi = 3pi/4.
double dimerization(const CouplingModel& model);

/// Driving strength eta in [eta_lo, eta_hi] at which dimerization(model) equals
/// target. Throws Error(domain) when the target is not bracketed.
double eta_for_dimerization(CouplingModel model, double target, double eta_lo = 0.0,
                            double eta_hi = 1.7);

/// Tilt of the standing wave (degrees) that yields |dk_z| d0 = pi/2.
double standing_wave_tilt(double wavelength, double spacing);

/// Largest |J_{j,l}| over the chain (the nearest-neighbour value).
double max_bare_coupling(const CouplingModel& model);

}  // namespace sshion
