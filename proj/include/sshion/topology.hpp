#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sshion/couplings.hpp"

namespace sshion {

/// Two-band pseudospin Bloch Hamiltonian h_mu = d0 + d . sigma on the grid
/// k_mu = 2 pi mu / M. The unit cell is (A, B) = (2n-1, 2n).
struct BlochHamiltonian {
  int m_cells = 0;
  Eigen::VectorXd d0;     // identity component per mu
  Eigen::MatrixX3d d;     // (d_x, d_y, d_z) per mu
  CouplingModel model;
  int range_cells = 0;    // number of cell separations kept in the sums

  Eigen::Matrix2cd block(int mu) const;
};

struct ZakResult {
  double nu = 0.0;  // folded to (-pi, pi]
  bool quantized = false;
  double gap_min = 0.0;
};

/// Sublattice sums are cut once |J_d| < 1e-12 |J_1| for the three distances
/// a cell separation touches. Throws Error(domain) for m_cells < 2.
BlochHamiltonian build_bloch(const CouplingModel& model, int m_cells);

/// Lower-band eigenvector of each block, first nonzero component real positive.
std::vector<Eigen::Vector2cd> lower_band_states(const BlochHamiltonian& bloch);

/// -Im log prod <u_{mu+1}|u_mu> over a closed loop (u_M = u_0).
double berry_phase(const std::vector<Eigen::Vector2cd>& states);

/// Throws Error(gapless) when min 2|d_mu| <= 1e-8.
ZakResult zak_phase(const BlochHamiltonian& bloch);

/// max |d_z| / max |d|; zero in the chiral-symmetric limits.
double chirality_defect(const BlochHamiltonian& bloch);

}  // namespace sshion
