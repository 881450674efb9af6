#include "sshion/floquet.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "sshion/errors.hpp"
#include "sshion/lattice.hpp"
#include "sshion/manybody.hpp"

namespace sshion {
namespace {

constexpr double kNormDriftLimit = 1e-6;

using State = std::vector<std::complex<double>>;

struct Bond {
  int j, l;  // 0-based sites, j < l
  std::uint32_t mask;
  double c;  // 2 J_{jl}
};

std::vector<Bond> ising_bonds(const CouplingModel& model) {
  std::vector<Bond> bonds;
  const int n = model.n_sites;
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const double c = 2.0 * bare_coupling_at(model, l - j);
      if (c != 0.0) bonds.push_back({j, l, (1u << j) | (1u << l), c});
    }
  }
  return bonds;
}

void check_size(const CouplingModel& model) {
  model.validate();
  if (model.n_sites > kMaxDrivenSites) {
    fail(ErrorKind::resource, "driven-model integration limited to N <= 10");
  }
}

// out += H'(t) psi, sharing the bond list across calls.
template <class In, class Out>
void accumulate(const DrivenModel& model, const std::vector<Bond>& bonds, double t, const In& psi,
                Out& out) {
  const int n = model.base.n_sites;
  std::vector<double> delta(n);
  for (int j = 0; j < n; ++j) delta[j] = frame_angle(model, j + 1, t);
  const std::uint32_t dim = 1u << n;
  for (const Bond& b : bonds) {
    const std::complex<double> pe = b.c * std::polar(1.0, 2.0 * (delta[b.j] - delta[b.l]));
    const std::complex<double> pa = b.c * std::polar(1.0, 2.0 * (delta[b.j] + delta[b.l]));
    for (std::uint32_t s = 0; s < dim; ++s) {
      const bool uj = (s >> b.j) & 1u;
      const bool ul = (s >> b.l) & 1u;
      std::complex<double> amp;
      if (uj != ul) {
        amp = ul ? pe : std::conj(pe);  // s+_j s-_l or its conjugate
      } else {
        if (!model.include_anomalous) continue;
        amp = ul ? std::conj(pa) : pa;  // s-_j s-_l or s+_j s+_l
      }
      out[s ^ b.mask] += amp * psi[s];
    }
  }
}

}  // namespace

DrivenModel DrivenModel::with_ratios(CouplingModel base, double omega_over_j, double drive_over_j) {
  DrivenModel m;
  const double j = max_bare_coupling(base);
  base.omega_rabi = omega_over_j * j;
  base.omega_drive = drive_over_j * j;
  m.base = base;
  return m;
}

double DrivenModel::drive_period() const {
  if (!(base.omega_drive > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / base.omega_drive;
}

double DrivenModel::max_step() const {
  double step = drive_period() / 40.0;
  if (integrator_step > 0.0) step = std::min(step, integrator_step);
  if (!std::isfinite(step)) step = 0.05 / std::max(max_coupling(), 1e-300);
  return step;
}

double frame_angle(const DrivenModel& model, int site, double t) {
  const CouplingModel& b = model.base;
  return 0.5 * b.omega_rabi * t +
         0.5 * b.eta * std::cos(0.5 * std::numbers::pi * site + b.phi) * std::sin(b.omega_drive * t);
}

std::complex<double> exchange_phase(const DrivenModel& model, int j, int l, double t) {
  return std::polar(1.0, 2.0 * (frame_angle(model, j, t) - frame_angle(model, l, t)));
}

Eigen::MatrixXcd rotating_frame_hamiltonian(const DrivenModel& model, double t) {
  check_size(model.base);
  const int dim = 1 << model.base.n_sites;
  const auto bonds = ising_bonds(model.base);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Unit(dim, s);
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(dim);
    accumulate(model, bonds, t, e, col);
    h.col(s) = col;
  }
  return h;
}

Eigen::VectorXcd apply_rotating_frame(const DrivenModel& model, double t, const Eigen::VectorXcd& psi) {
  check_size(model.base);
  if (psi.size() != (Eigen::Index{1} << model.base.n_sites)) fail(ErrorKind::domain, "state size must be 2^N");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  accumulate(model, ising_bonds(model.base), t, psi, out);
  return out;
}

Trajectory integrate_schrodinger(const DrivenModel& model, const Eigen::VectorXcd& initial,
                                 double t_final) {
  namespace ode = boost::numeric::odeint;
  check_size(model.base);
  const Eigen::Index dim = Eigen::Index{1} << model.base.n_sites;
  if (initial.size() != dim) fail(ErrorKind::domain, "state size must be 2^N");
  if (std::fabs(initial.norm() - 1.0) > 1e-12) fail(ErrorKind::domain, "initial state must be normalized");
  if (!(t_final >= 0.0)) fail(ErrorKind::domain, "t_final must be non-negative");

  const auto bonds = ising_bonds(model.base);
  auto rhs = [&](const State& x, State& dxdt, double t) {
    std::fill(dxdt.begin(), dxdt.end(), std::complex<double>(0.0));
    accumulate(model, bonds, t, x, dxdt);
    for (auto& v : dxdt) v *= std::complex<double>(0.0, -1.0);
  };

  Trajectory traj;
  State x(initial.data(), initial.data() + dim);
  auto observe = [&](const State& s, double t) {
    Eigen::Map<const Eigen::VectorXcd> v(s.data(), dim);
    const double drift = std::fabs(v.squaredNorm() - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (drift > kNormDriftLimit) {
      fail(ErrorKind::numerical, "norm drift " + std::to_string(drift) + " exceeds 1e-6; reduce the step");
    }
    traj.times.push_back(t);
    traj.states.emplace_back(v);
  };
  if (t_final == 0.0) {
    observe(x, 0.0);
    return traj;
  }
  const double max_dt = model.max_step();
  auto stepper = ode::make_controlled(model.abs_tolerance, model.rel_tolerance, max_dt,
                                      ode::runge_kutta_dopri5<State>());
  traj.steps = ode::integrate_adaptive(stepper, rhs, x, 0.0, t_final, 0.1 * max_dt, observe);
  return traj;
}

Eigen::VectorXcd evolve_effective(const CouplingModel& model, const Eigen::VectorXcd& initial, double t) {
  check_size(model);
  const CouplingMatrix h = build_coupling_matrix(model);
  const Eigen::Index dim = Eigen::Index{1} << model.n_sites;
  if (initial.size() != dim) fail(ErrorKind::domain, "state size must be 2^N");
  Eigen::MatrixXd dense(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    dense.col(s) = apply_spin_hamiltonian(h, Eigen::VectorXd::Unit(dim, s));
  }
  const SpectralDecomposition spec = diagonalize(dense);
  const Eigen::MatrixXcd modes = spec.modes.cast<std::complex<double>>();
  Eigen::VectorXcd coeff = modes.adjoint() * initial;
  for (Eigen::Index k = 0; k < dim; ++k) coeff(k) *= std::polar(1.0, -spec.energies(k) * t);
  return modes * coeff;
}

FidelityReport effective_model_fidelity(const DrivenModel& model, const Eigen::VectorXcd& initial,
                                        double t_final) {
  FidelityReport r;
  r.max_j = model.max_coupling();
  r.omega_over_j = model.base.omega_rabi / r.max_j;
  r.drive_over_j = model.base.omega_drive / r.max_j;
  r.separated = r.drive_over_j >= 10.0 && r.omega_over_j >= 10.0;
  const Trajectory traj = integrate_schrodinger(model, initial, t_final);
  const Eigen::VectorXcd eff = evolve_effective(model.base, initial, t_final);
  r.fidelity = std::norm(eff.dot(traj.final_state()));
  r.norm_drift = traj.max_norm_drift;
  r.steps = traj.steps;
  return r;
}

Eigen::VectorXcd single_excitation_state(int n_sites, int site) {
  if (n_sites < 1 || n_sites > kMaxDrivenSites) fail(ErrorKind::resource, "N must lie in 1..10");
  if (site < 1 || site > n_sites) fail(ErrorKind::domain, "site out of range");
  return Eigen::VectorXcd::Unit(Eigen::Index{1} << n_sites, Eigen::Index{1} << (site - 1));
}

}  // namespace sshion
