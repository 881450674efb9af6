#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string_view>
#include <vector>

#include "sshion/couplings.hpp"

namespace sshion {

/// Eigen-decomposition of a real symmetric matrix; energies ascending,
/// column n of `modes` is the eigenvector belonging to energies[n].
struct SpectralDecomposition {
  Eigen::VectorXd energies;
  Eigen::MatrixXd modes;

  int size() const { return static_cast<int>(energies.size()); }
};

SpectralDecomposition diagonalize(const Eigen::MatrixXd& matrix);
SpectralDecomposition diagonalize(const CouplingMatrix& matrix);

/// max_n ||H v_n - e_n v_n||_inf / ||H||_inf
double eigen_residual(const Eigen::MatrixXd& matrix, const SpectralDecomposition& spec);
/// max |M^T M - 1|
double orthonormality_error(const SpectralDecomposition& spec);

enum class EdgeSide { left, right, hybridized };
std::string_view to_string(EdgeSide side) noexcept;

struct EdgeStateReport {
  // Bulk gap bracketing the mid-gap levels (or the bare gap when none exist).
  double gap_lower = 0.0;
  double gap_upper = 0.0;
  std::vector<int> midgap_indices;  // 0-based positions in the spectrum
  std::vector<double> midgap_energies;
  // Edge profile used for diagnostics: the left-most combination of the
  // mid-gap states. Empty when the spectrum has no mid-gap level.
  Eigen::VectorXd profile;
  double sublattice_purity = 0.0;  // weight of `profile` on odd sites
  std::optional<EdgeSide> edge_side;
  std::optional<double> xi_loc;
  std::optional<double> fit_rms;

  bool topological() const { return !midgap_indices.empty(); }
  double gap() const { return gap_upper - gap_lower; }
};

/// Locates (quasi-)zero modes inside the bulk gap.
///
/// Candidates are one or two adjacent levels in the central 20% of the
/// spectrum. A candidate counts as mid-gap when both of its flanking
/// spacings are at least `contrast` times the larger of the next spacings
/// outward, and, for a pair, exceed the splitting inside the pair. The
/// candidate with the highest contrast wins. A spectrum without a candidate is reported as trivial, with the
/// largest central spacing as its gap.
EdgeStateReport find_edge_states(const SpectralDecomposition& spec, double contrast = 1.5);

struct LocalizationFit {
  double xi_loc = 0.0;
  double fit_rms = 0.0;
  int n_points = 0;
  int first_site = 0;  // 1-based, inclusive
  int last_site = 0;
};

/// Exponential fit of the edge profile.
///
/// Uses the majority sublattice of the near-edge half of the chain, starting
/// at the edge and extending while the amplitude stays above 1% of its peak
/// (and above 1e-8). Throws Error(fit) with fewer than 4 usable points and
/// Error(domain) when the report has no left or right edge state.
LocalizationFit fit_localization_length(const SpectralDecomposition& spec,
                                        const EdgeStateReport& report);

/// find_edge_states followed by the fit; the fit fields stay empty when the
/// state is absent, hybridized or too sharply localized to fit.
EdgeStateReport analyze_edge(const SpectralDecomposition& spec, double contrast = 1.5);

/// Localization length of the nearest-neighbour SSH chain, -2 / ln((1-d)/(1+d)).
double ssh_localization_length(double dimerization);

}  // namespace sshion
