#include "sshion/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sshion/errors.hpp"

namespace sshion {
namespace {

constexpr double kRangeCut = 1e-12;
constexpr int kMaxRangeCells = 1 << 20;
constexpr double kGapTolerance = 1e-8;
constexpr double kQuantizationTolerance = 1e-6;

struct CellTerm {
  int separation;  // n - m
  double aa, bb;   // intra-sublattice couplings at this separation
  double ab_fwd;   // A_m -> B_{m+s}
  double ab_bwd;   // A_m -> B_{m-s}
};

double dressed(const CouplingModel& model, int j, int l) {
  const int dist = std::abs(j - l);
  if (dist == 0) return 0.0;
  return bare_coupling_at(model, dist) * bessel_dressing(model, j, l);
}

}  // namespace

Eigen::Matrix2cd BlochHamiltonian::block(int mu) const {
  const std::complex<double> i(0.0, 1.0);
  const double x = d(mu, 0), y = d(mu, 1), z = d(mu, 2);
  Eigen::Matrix2cd h;
  h << d0(mu) + z, x - i * y, x + i * y, d0(mu) - z;
  return h;
}

BlochHamiltonian build_bloch(const CouplingModel& model, int m_cells) {
  model.validate();
  if (m_cells < 2) fail(ErrorKind::domain, "Bloch grid needs at least 2 cells");
  const double j1 = std::fabs(bare_coupling_at(model, 1));
  const double cut = kRangeCut * j1;

  // s = 0 carries only the intra-cell A-B bond.
  std::vector<CellTerm> terms;
  terms.push_back({0, 0.0, 0.0, dressed(model, 1, 2), 0.0});
  for (int s = 1; s <= kMaxRangeCells; ++s) {
    const double a = std::fabs(bare_coupling_at(model, 2 * s - 1));
    const double b = std::fabs(bare_coupling_at(model, 2 * s));
    const double c = std::fabs(bare_coupling_at(model, 2 * s + 1));
    if (std::max({a, b, c}) < cut) break;
    terms.push_back({s, dressed(model, 1, 1 + 2 * s), dressed(model, 2, 2 + 2 * s),
                     dressed(model, 1, 2 + 2 * s), dressed(model, 1, 2 - 2 * s)});
  }

  BlochHamiltonian out;
  out.m_cells = m_cells;
  out.model = model;
  out.range_cells = terms.back().separation;
  out.d0.resize(m_cells);
  out.d.resize(m_cells, 3);
  for (int mu = 0; mu < m_cells; ++mu) {
    const double k = 2.0 * std::numbers::pi * mu / m_cells;
    double aa = 0.0, bb = 0.0;
    std::complex<double> ab = 0.0;
    for (const CellTerm& t : terms) {
      const double c = std::cos(k * t.separation);
      aa += 2.0 * t.aa * c;
      bb += 2.0 * t.bb * c;
      ab += t.ab_fwd * std::polar(1.0, k * t.separation) +
            t.ab_bwd * std::polar(1.0, -k * t.separation);
    }
    out.d0(mu) = 0.5 * (aa + bb);
    out.d(mu, 0) = ab.real();
    out.d(mu, 1) = -ab.imag();
    out.d(mu, 2) = 0.5 * (aa - bb);
  }
  return out;
}

std::vector<Eigen::Vector2cd> lower_band_states(const BlochHamiltonian& bloch) {
  std::vector<Eigen::Vector2cd> states;
  states.reserve(bloch.m_cells);
  for (int mu = 0; mu < bloch.m_cells; ++mu) {
    const std::complex<double> off(bloch.d(mu, 0), bloch.d(mu, 1));  // d_x + i d_y
    const double z = bloch.d(mu, 2);
    const double r = std::hypot(std::abs(off), z);
    // Two null vectors of (d.sigma + |d|); keep the better conditioned one.
    Eigen::Vector2cd u1(std::conj(off), -(z + r));
    Eigen::Vector2cd u2(r - z, -off);
    Eigen::Vector2cd u = u1.squaredNorm() >= u2.squaredNorm() ? u1 : u2;
    const double norm = u.norm();
    if (norm == 0.0) {
      u << 1.0, 0.0;
    } else {
      u /= norm;
    }
    const int lead = std::abs(u(0)) > 0.0 ? 0 : 1;
    u *= std::polar(1.0, -std::arg(u(lead)));
    states.push_back(u);
  }
  return states;
}

double berry_phase(const std::vector<Eigen::Vector2cd>& states) {
  const std::size_t m = states.size();
  std::complex<double> product = 1.0;
  for (std::size_t mu = 0; mu < m; ++mu) {
    const auto& next = states[(mu + 1) % m];
    const std::complex<double> overlap = next.dot(states[mu]);  // conj(next) . u
    if (std::abs(overlap) < 1e-300) fail(ErrorKind::numerical, "orthogonal neighbouring Bloch states");
    product *= overlap / std::abs(overlap);
  }
  double nu = -std::arg(product);
  if (nu <= -std::numbers::pi) nu += 2.0 * std::numbers::pi;
  return nu;
}

ZakResult zak_phase(const BlochHamiltonian& bloch) {
  ZakResult out;
  out.gap_min = 2.0 * bloch.d.rowwise().norm().minCoeff();
  if (!(out.gap_min > kGapTolerance)) {
    fail(ErrorKind::gapless, "Bloch gap closes (min 2|d| = " + std::to_string(out.gap_min) +
                                 "); Zak phase undefined");
  }
  out.nu = berry_phase(lower_band_states(bloch));
  const double a = std::fabs(out.nu);
  out.quantized = a < kQuantizationTolerance || std::fabs(a - std::numbers::pi) < kQuantizationTolerance;
  return out;
}

double chirality_defect(const BlochHamiltonian& bloch) {
  const double scale = bloch.d.rowwise().norm().maxCoeff();
  if (scale == 0.0) return 0.0;
  return bloch.d.col(2).cwiseAbs().maxCoeff() / scale;
}

}  // namespace sshion
