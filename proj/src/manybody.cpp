#include "sshion/manybody.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "sshion/errors.hpp"

namespace sshion {
namespace {

constexpr int kDenseSectorLimit = 200;
constexpr int kMaxLanczos = 400;
constexpr double kLanczosTolerance = 1e-13;
constexpr double kZeroMode = 1e-10;

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;
};

Eigenpair lanczos_lowest(const Eigen::SparseMatrix<double, Eigen::RowMajor>& h) {
  const int dim = static_cast<int>(h.rows());
  const int kmax = std::min(dim, kMaxLanczos);
  double scale = 0.0;
  for (int r = 0; r < dim; ++r) scale = std::max(scale, h.row(r).cwiseAbs().sum());
  scale = std::max(scale, 1e-300);

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd basis(dim, kmax);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = uni(rng);
  v.normalize();

  std::vector<double> alpha, beta;
  Eigen::VectorXd ritz;
  double theta = 0.0;
  for (int k = 0; k < kmax; ++k) {
    basis.col(k) = v;
    Eigen::VectorXd w = h * v;
    const double a = v.dot(w);
    alpha.push_back(a);
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd overlap = basis.leftCols(k + 1).transpose() * w;
      w.noalias() -= basis.leftCols(k + 1) * overlap;
    }
    const double b = w.norm();

    const int m = k + 1;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    theta = tri.eigenvalues()(0);
    ritz = tri.eigenvectors().col(0);
    const bool invariant = b < kLanczosTolerance * scale;
    if (invariant || b * std::fabs(ritz(m - 1)) < kLanczosTolerance * scale || m == kmax) {
      if (!invariant && m == kmax && m < dim &&
          b * std::fabs(ritz(m - 1)) >= 1e-9 * scale) {
        fail(ErrorKind::numerical, "Lanczos did not converge in " + std::to_string(kmax) + " steps");
      }
      Eigen::VectorXd x = basis.leftCols(m) * ritz;
      x.normalize();
      return {theta, x};
    }
    beta.push_back(b);
    v = w / b;
  }
  fail(ErrorKind::numerical, "Lanczos failed");
}

Eigenpair lowest_eigenpair(const Eigen::SparseMatrix<double, Eigen::RowMajor>& h) {
  if (h.rows() <= kDenseSectorLimit) {
    const Eigen::MatrixXd dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "sector eigensolver failed");
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
  }
  return lanczos_lowest(h);
}

// Mean-field kernel in the site basis from a one-body correlation matrix.
Eigen::MatrixXd mean_field_kernel(const Eigen::VectorXd& j2, const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 2 < n; ++j) {
    const double c = j2(j);
    if (c == 0.0) continue;
    const int b = j + 1;
    for (const auto& [x1, x4] : {std::pair{j, j + 2}, std::pair{j + 2, j}}) {
      w(b, x4) -= c * g(x1, b);
      w(b, b) += c * g(x1, x4);
      w(x1, x4) += c * g(b, b);
      w(x1, b) -= c * g(b, x4);
    }
  }
  return w;
}

Eigen::MatrixXd occupied_correlation(const Eigen::MatrixXd& orbitals, const std::vector<int>& filled) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(orbitals.rows(), orbitals.rows());
  for (int k : filled) g.noalias() += orbitals.col(k) * orbitals.col(k).transpose();
  return g;
}

double weight_sum(const HartreeFockResult& hf, const Eigen::VectorXd& v_es, double e_es,
                  const std::vector<int>& excluded) {
  double sum = 0.0;
  const int n = static_cast<int>(hf.orbital_energies.size());
  for (int mu = 0; mu < n; ++mu) {
    if (std::find(excluded.begin(), excluded.end(), mu) != excluded.end()) continue;
    const double v = v_es(mu);
    const double gap = e_es - hf.orbital_energies(mu);
    if (std::fabs(gap) < 1e-12) {
      if (std::fabs(v) > 1e-14) {
        fail(ErrorKind::degenerate, "edge orbital degenerate with orbital " + std::to_string(mu) +
                                        " at non-zero coupling");
      }
      continue;
    }
    sum += 4.0 * v * v / (gap * gap);
  }
  return 1.0 - sum;
}

}  // namespace

SectorBasis SectorBasis::build(int n_sites, int n_excitations) {
  if (n_sites < 1 || n_sites > 30) fail(ErrorKind::resource, "sector basis supports 1..30 sites");
  if (n_excitations < 0 || n_excitations > n_sites) fail(ErrorKind::domain, "excitation number out of range");
  SectorBasis b;
  b.n_sites = n_sites;
  b.n_excitations = n_excitations;
  if (n_excitations == 0) {
    b.states.push_back(0u);
    return b;
  }
  // Gosper's hack enumerates patterns of fixed popcount in ascending order.
  std::uint32_t s = (1u << n_excitations) - 1u;
  const std::uint64_t limit = std::uint64_t{1} << n_sites;
  while (s < limit) {
    b.states.push_back(s);
    const std::uint32_t c = s & (~s + 1u);
    const std::uint32_t r = s + c;
    if (r == 0u) break;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return b;
}

int SectorBasis::index_of(std::uint32_t pattern) const {
  const auto it = std::lower_bound(states.begin(), states.end(), pattern);
  if (it == states.end() || *it != pattern) return -1;
  return static_cast<int>(it - states.begin());
}

Eigen::SparseMatrix<double, Eigen::RowMajor> sector_hamiltonian(const CouplingMatrix& h,
                                                                const SectorBasis& basis) {
  const int n = basis.n_sites;
  if (h.n_sites() != n) fail(ErrorKind::domain, "coupling matrix and basis sizes differ");
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(basis.size()) * basis.n_excitations *
                  (n - basis.n_excitations));
  for (int col = 0; col < basis.size(); ++col) {
    const std::uint32_t s = basis.states[col];
    for (int j = 0; j < n; ++j) {
      if (!((s >> j) & 1u)) continue;
      for (int l = 0; l < n; ++l) {
        if ((s >> l) & 1u) continue;
        const double c = h.entries(j, l);
        if (c == 0.0) continue;
        const int row = basis.index_of(s ^ (1u << j) ^ (1u << l));
        entries.emplace_back(row, col, 2.0 * c);
      }
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> out(basis.size(), basis.size());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Eigen::VectorXd apply_spin_hamiltonian(const CouplingMatrix& h, const Eigen::VectorXd& state) {
  const int n = h.n_sites();
  if (n > kMaxExactSites + 4) fail(ErrorKind::resource, "full-space application limited to 20 sites");
  if (state.size() != (Eigen::Index{1} << n)) fail(ErrorKind::domain, "state size must be 2^N");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(state.size());
  for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(state.size()); ++s) {
    if (state(s) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (!((s >> j) & 1u)) continue;
      for (int l = 0; l < n; ++l) {
        if ((s >> l) & 1u) continue;
        out(s ^ (1u << j) ^ (1u << l)) += 2.0 * h.entries(j, l) * state(s);
      }
    }
  }
  return out;
}

GroundState exact_ground_state(const CouplingMatrix& h) {
  const int n = h.n_sites();
  if (n > kMaxExactSites) {
    fail(ErrorKind::resource, "exact diagonalization limited to N <= 16 (got " + std::to_string(n) + ")");
  }
  const double scale = std::max(h.entries.cwiseAbs().sum(), 1e-300);
  GroundState best;
  bool have = false;
  for (int m = 0; m <= n; ++m) {
    SectorBasis basis = SectorBasis::build(n, m);
    const auto hs = sector_hamiltonian(h, basis);
    Eigenpair e = lowest_eigenpair(hs);
    best.sector_energies.push_back(e.value);
    if (!have || e.value < best.energy - 1e-10 * scale) {
      best.energy = e.value;
      best.state = std::move(e.vector);
      best.basis = std::move(basis);
      have = true;
    }
  }
  int count = 0;
  for (double e : best.sector_energies) {
    if (std::fabs(e - best.energy) <= 1e-10 * scale) ++count;
  }
  best.degenerate_sectors = count > 1;
  // Fix the overall sign for reproducible output.
  Eigen::Index arg = 0;
  best.state.cwiseAbs().maxCoeff(&arg);
  if (best.state(arg) < 0.0) best.state = -best.state;
  return best;
}

double correlator_zz(const Eigen::VectorXd& state, const SectorBasis& basis) {
  if (state.size() != basis.size()) fail(ErrorKind::domain, "state and basis sizes differ");
  const int last = basis.n_sites - 1;
  double zz = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    const std::uint32_t s = basis.states[i];
    const bool same = (s & 1u) == ((s >> last) & 1u);
    zz += (same ? 1.0 : -1.0) * state(i) * state(i);
  }
  return zz;
}

double zz_from_correlation(const Eigen::MatrixXd& g) {
  const Eigen::Index last = g.rows() - 1;
  const double n1 = g(0, 0), nn = g(last, last);
  const double pair = n1 * nn - g(0, last) * g(last, 0);
  return 1.0 - 2.0 * n1 - 2.0 * nn + 4.0 * pair;
}

FreeFermionState free_fermion_ground_state(const Eigen::MatrixXd& t, bool fill_zero_modes) {
  const SpectralDecomposition spec = diagonalize(t);
  FreeFermionState out;
  std::vector<int> filled;
  for (int k = 0; k < spec.size(); ++k) {
    const double e = spec.energies(k);
    const bool zero = std::fabs(e) < kZeroMode;
    if (zero) out.zero_mode = true;
    if (e < 0.0 || (zero && fill_zero_modes)) {
      filled.push_back(k);
      out.energy += e;
    }
  }
  out.correlation = occupied_correlation(spec.modes, filled);
  out.correlator_zz = zz_from_correlation(out.correlation);
  return out;
}

Eigen::MatrixXd TruncatedFermionModel::hopping_matrix() const {
  const int n = n_sites();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) t(j, j + 1) = t(j + 1, j) = j1(j);
  for (int j = 0; j + 2 < n; ++j) t(j, j + 2) = t(j + 2, j) = j2(j);
  return t;
}

TruncatedFermionModel build_truncated_fermion_model(const CouplingMatrix& h) {
  const int n = h.n_sites();
  if (n < 2) fail(ErrorKind::domain, "need at least two sites");
  TruncatedFermionModel out;
  out.j1.resize(n - 1);
  out.j2 = Eigen::VectorXd::Zero(std::max(n - 2, 0));
  for (int j = 0; j + 1 < n; ++j) out.j1(j) = 2.0 * h.entries(j, j + 1);
  for (int j = 0; j + 2 < n; ++j) out.j2(j) = 2.0 * h.entries(j, j + 2);
  return out;
}

TruncatedFermionModel build_truncated_fermion_model(const CouplingModel& model) {
  return build_truncated_fermion_model(build_coupling_matrix(model));
}

HartreeFockResult hartree_fock(const TruncatedFermionModel& model, const HartreeFockOptions& options) {
  HartreeFockResult out;
  const SpectralDecomposition free = diagonalize(model.hopping_matrix());
  out.orbital_energies = free.energies;
  out.orbitals = free.modes;
  const int n = free.size();
  const Eigen::VectorXd j2 = options.interaction_scale * model.j2;

  std::vector<int> filled;
  for (int k = 0; k < n; ++k) {
    if (free.energies(k) < 0.0) filled.push_back(k);
  }
  Eigen::MatrixXd g = occupied_correlation(free.modes, filled);

  const int max_iter = options.self_consistent ? options.max_iterations : 1;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXd v = free.modes.transpose() * mean_field_kernel(j2, g) * free.modes;
    out.v_matrix = 0.5 * (v + v.transpose());
    Eigen::MatrixXd h_hf = -2.0 * out.v_matrix;
    h_hf.diagonal() += free.energies;
    const SpectralDecomposition hf = diagonalize(free.modes * h_hf * free.modes.transpose());
    out.hf_energies = hf.energies;
    out.hf_orbitals = hf.modes;
    out.iterations = it;

    out.occupation.clear();
    std::vector<int> with_zero;
    out.ambiguous_filling = false;
    for (int k = 0; k < n; ++k) {
      const double e = hf.energies(k);
      const bool zero = std::fabs(e) < kZeroMode;
      if (zero) out.ambiguous_filling = true;
      if (e < 0.0) out.occupation.push_back(k);
      if (e < 0.0 || zero) with_zero.push_back(k);
    }
    const Eigen::MatrixXd g_new = occupied_correlation(hf.modes, out.occupation);
    out.correlator_zz = zz_from_correlation(g_new);
    out.correlator_zz_alt.reset();
    if (out.ambiguous_filling) {
      out.correlator_zz_alt = zz_from_correlation(occupied_correlation(hf.modes, with_zero));
    }
    const double change = (g_new - g).cwiseAbs().maxCoeff();
    g = options.mixing * g_new + (1.0 - options.mixing) * g;
    if (options.self_consistent && change < options.tolerance) break;
    if (options.self_consistent && it == max_iter) {
      fail(ErrorKind::numerical, "self-consistent Hartree-Fock did not converge");
    }
  }

  if (find_edge_states(free).topological()) {
    try {
      out.z_weight = quasiparticle_weight(out);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate) throw;
    }
  }
  return out;
}

HartreeFockResult hartree_fock(const CouplingModel& model, const HartreeFockOptions& options) {
  return hartree_fock(build_truncated_fermion_model(model), options);
}

double quasiparticle_weight(const HartreeFockResult& hf) {
  const SpectralDecomposition free{hf.orbital_energies, hf.orbitals};
  const EdgeStateReport edges = find_edge_states(free);
  if (!edges.topological()) fail(ErrorKind::domain, "no edge orbital in the quadratic spectrum");
  const std::vector<int>& pair = edges.midgap_indices;
  Eigen::VectorXd v_es = Eigen::VectorXd::Zero(hf.v_matrix.rows());
  double e_es = 0.0;
  for (int k : pair) {
    const double x = hf.orbitals.col(k).dot(edges.profile);
    v_es += x * hf.v_matrix.row(k).transpose();
    e_es += x * x * hf.orbital_energies(k);
  }
  return weight_sum(hf, v_es, e_es, pair);
}

double quasiparticle_weight(const HartreeFockResult& hf, int edge_index) {
  if (edge_index < 0 || edge_index >= hf.orbital_energies.size()) {
    fail(ErrorKind::domain, "edge orbital index out of range");
  }
  return weight_sum(hf, hf.v_matrix.row(edge_index).transpose(), hf.orbital_energies(edge_index),
                    {edge_index});
}

}  // namespace sshion
