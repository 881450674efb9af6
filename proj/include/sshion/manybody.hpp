#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <vector>

#include "sshion/couplings.hpp"
#include "sshion/lattice.hpp"

namespace sshion {

/// Spin configurations with a fixed number of up spins. Bit j-1 is site j;
/// a set bit is an up spin (sigma^z = +1).
struct SectorBasis {
  int n_sites = 0;
  int n_excitations = 0;
  std::vector<std::uint32_t> states;  // ascending

  static SectorBasis build(int n_sites, int n_excitations);
  int size() const { return static_cast<int>(states.size()); }
  /// Position of `pattern`, or -1 when it is not in the sector.
  int index_of(std::uint32_t pattern) const;
};

inline constexpr int kMaxExactSites = 16;

/// H = sum_{j<l} 2 h_{jl} (s+_j s-_l + s-_j s+_l) restricted to one sector.
Eigen::SparseMatrix<double, Eigen::RowMajor> sector_hamiltonian(const CouplingMatrix& h,
                                                                const SectorBasis& basis);

/// Same operator applied to a vector over the full 2^N space.
Eigen::VectorXd apply_spin_hamiltonian(const CouplingMatrix& h, const Eigen::VectorXd& state);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd state;
  SectorBasis basis;
  std::vector<double> sector_energies;  // index m
  // Another sector reaches the same energy; the lowest m was kept.
  bool degenerate_sectors = false;
};

/// Lowest eigenpair over all sectors (dense solver for small sectors, Lanczos
/// with full reorthogonalization otherwise). Throws Error(resource) for N > 16.
GroundState exact_ground_state(const CouplingMatrix& h);

/// <sigma^z_1 sigma^z_N> of a normalized sector state.
double correlator_zz(const Eigen::VectorXd& state, const SectorBasis& basis);

/// Ground state of a quadratic number-conserving fermion Hamiltonian T.
struct FreeFermionState {
  double energy = 0.0;
  Eigen::MatrixXd correlation;  // G_ij = <c+_i c_j>
  double correlator_zz = 0.0;
  bool zero_mode = false;  // some level lies within 1e-10 of zero
};

/// Fills every strictly negative level, plus every level within 1e-10 of
/// zero when fill_zero_modes is set.
FreeFermionState free_fermion_ground_state(const Eigen::MatrixXd& t, bool fill_zero_modes = false);

/// <sigma^z_1 sigma^z_N> from a one-body correlation matrix (Wick).
double zz_from_correlation(const Eigen::MatrixXd& g);

/// Hoppings of the Jordan-Wigner model truncated at |j - l| <= 2:
/// J1_j = 2 h_{j,j+1} (j = 1..N-1) and J2_j = 2 h_{j,j+2} (j = 1..N-2).
struct TruncatedFermionModel {
  Eigen::VectorXd j1;
  Eigen::VectorXd j2;

  int n_sites() const { return static_cast<int>(j1.size()) + 1; }
  /// Quadratic part: T_{j,j+1} = J1_j, T_{j,j+2} = J2_j.
  Eigen::MatrixXd hopping_matrix() const;
};

TruncatedFermionModel build_truncated_fermion_model(const CouplingModel& model);
TruncatedFermionModel build_truncated_fermion_model(const CouplingMatrix& h);

struct HartreeFockOptions {
  bool self_consistent = false;
  double interaction_scale = 1.0;  // multiplies J2 in the quartic part only
  int max_iterations = 500;
  double tolerance = 1e-12;
  double mixing = 0.5;  // weight of the new correlation matrix per iteration
};

struct HartreeFockResult {
  Eigen::VectorXd orbital_energies;  // spectrum of the quadratic part
  Eigen::MatrixXd orbitals;          // site x orbital
  Eigen::MatrixXd v_matrix;          // orbital basis
  Eigen::VectorXd hf_energies;
  Eigen::MatrixXd hf_orbitals;       // site basis
  std::vector<int> occupation;       // filled HF orbitals
  double correlator_zz = 0.0;
  bool ambiguous_filling = false;
  std::optional<double> correlator_zz_alt;  // with the zero modes filled
  std::optional<double> z_weight;
  int iterations = 1;
};

/// Mean-field treatment of the truncated model: V is built from the ground
/// state of the quadratic part, H_HF = diag(e) - 2V. z_weight is filled when
/// the quadratic part has edge orbitals.
HartreeFockResult hartree_fock(const TruncatedFermionModel& model, const HartreeFockOptions& options = {});
HartreeFockResult hartree_fock(const CouplingModel& model, const HartreeFockOptions& options = {});

/// Z = 1 - sum_mu 4 |V_{ES,mu}|^2 / (e_ES - e_mu)^2, with ES the left-localized
/// combination of the edge orbitals found in the quadratic spectrum (its
/// partner is excluded from the sum). Throws Error(domain) without edge orbitals.
double quasiparticle_weight(const HartreeFockResult& hf);

/// Same sum with ES a single orbital of the quadratic spectrum. Throws
/// Error(degenerate) when |e_ES - e_mu| < 1e-12 while V_{ES,mu} != 0.
double quasiparticle_weight(const HartreeFockResult& hf, int edge_index);

}  // namespace sshion
