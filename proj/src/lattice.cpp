#include "sshion/lattice.hpp"

#include <algorithm>
#include <boost/container_hash/hash.hpp>
#include <cmath>
#include <sstream>

#include "sshion/errors.hpp"

namespace sshion {
namespace {

constexpr double kFitAmplitudeFloor = 1e-2;  // relative to the profile peak
constexpr double kFitAbsoluteFloor = 1e-8;
constexpr int kMinFitPoints = 4;

int edge_block(int n) { return std::max(1, n / 10); }

void normalize_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

// Unit vector in span{a, b} with maximal weight on the first `block` sites.
Eigen::VectorXd rotate_to_left(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int block) {
  const auto ha = a.head(block);
  const auto hb = b.head(block);
  Eigen::Matrix2d w;
  w << ha.squaredNorm(), ha.dot(hb), ha.dot(hb), hb.squaredNorm();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(w);
  const Eigen::Vector2d c = es.eigenvectors().col(1);
  Eigen::VectorXd u = c(0) * a + c(1) * b;
  u.normalize();
  return u;
}

struct GapChoice {
  int first = -1;   // first in-gap level (or -1 for a bare gap)
  int count = 0;    // number of in-gap levels
  double lower = 0.0;
  double upper = 0.0;
};

GapChoice locate_gap(const Eigen::VectorXd& e, double contrast) {
  const int n = static_cast<int>(e.size());
  GapChoice best;
  if (n < 2) return best;
  const int lo = std::max(1, static_cast<int>(std::floor(0.4 * n)));
  const int hi = std::min(n - 2, static_cast<int>(std::ceil(0.6 * n)) - 1);

  // Largest plain spacing in the central window.
  double widest = -1.0;
  for (int i = std::max(0, lo - 1); i <= std::min(n - 2, hi); ++i) {
    const double s = e(i + 1) - e(i);
    if (s > widest) {
      widest = s;
      best.lower = e(i);
      best.upper = e(i + 1);
    }
  }

  double score = 0.0;
  for (int k = 1; k <= 2; ++k) {
    for (int i = std::max(lo, 2); i + k - 1 <= hi && i + k + 1 < n; ++i) {
      const double below = e(i) - e(i - 1);
      const double above = e(i + k) - e(i + k - 1);
      const double inner = (k == 2) ? e(i + 1) - e(i) : 0.0;
      const double outer = std::max(e(i - 1) - e(i - 2), e(i + k + 1) - e(i + k));
      const double flank = std::min(below, above);
      if (!(flank > 0.0) || inner > flank) continue;
      const double ratio = outer > 0.0 ? flank / outer : INFINITY;
      if (ratio < contrast || ratio <= score) continue;
      score = ratio;
      best.first = i;
      best.count = k;
      best.lower = e(i - 1);
      best.upper = e(i + k);
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(EdgeSide side) noexcept {
  switch (side) {
    case EdgeSide::left: return "left";
    case EdgeSide::right: return "right";
    case EdgeSide::hybridized: return "hybridized";
  }
  return "hybridized";
}

SpectralDecomposition diagonalize(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) fail(ErrorKind::domain, "matrix must be square");
  if (!matrix.allFinite()) fail(ErrorKind::domain, "matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) {
    std::size_t seed = 0;
    boost::hash_range(seed, matrix.data(), matrix.data() + matrix.size());
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge (matrix hash " << std::hex << seed << ")";
    fail(ErrorKind::numerical, msg.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition diagonalize(const CouplingMatrix& matrix) {
  return diagonalize(matrix.entries);
}

double eigen_residual(const Eigen::MatrixXd& matrix, const SpectralDecomposition& spec) {
  const double scale = std::max(matrix.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  const Eigen::MatrixXd r =
      matrix * spec.modes - spec.modes * spec.energies.asDiagonal();
  return r.cwiseAbs().maxCoeff() / scale;
}

double orthonormality_error(const SpectralDecomposition& spec) {
  const Eigen::MatrixXd g = spec.modes.transpose() * spec.modes;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

EdgeStateReport find_edge_states(const SpectralDecomposition& spec, double contrast) {
  EdgeStateReport report;
  const int n = spec.size();
  const GapChoice gap = locate_gap(spec.energies, contrast);
  report.gap_lower = gap.lower;
  report.gap_upper = gap.upper;
  if (gap.count == 0) return report;

  for (int i = gap.first; i < gap.first + gap.count; ++i) {
    report.midgap_indices.push_back(i);
    report.midgap_energies.push_back(spec.energies(i));
  }
  const int block = edge_block(n);
  Eigen::VectorXd u = spec.modes.col(gap.first);
  if (gap.count == 2) u = rotate_to_left(u, spec.modes.col(gap.first + 1), block);
  normalize_sign(u);

  const double left = u.head(block).squaredNorm();
  const double right = u.tail(block).squaredNorm();
  if (left >= 2.0 * right) {
    report.edge_side = EdgeSide::left;
  } else if (right >= 2.0 * left) {
    report.edge_side = EdgeSide::right;
  } else {
    report.edge_side = EdgeSide::hybridized;
  }
  double odd = 0.0;
  for (int j = 0; j < n; j += 2) odd += u(j) * u(j);
  report.sublattice_purity = std::clamp(odd / u.squaredNorm(), 0.0, 1.0);
  report.profile = std::move(u);
  return report;
}

LocalizationFit fit_localization_length(const SpectralDecomposition& spec,
                                        const EdgeStateReport& report) {
  if (!report.topological() || !report.edge_side ||
      *report.edge_side == EdgeSide::hybridized) {
    fail(ErrorKind::domain, "no left or right edge state to fit");
  }
  const int n = spec.size();
  const bool from_left = *report.edge_side == EdgeSide::left;
  const Eigen::VectorXd& u = report.profile;
  const int half = n / 2;

  // distance x = 1, 2, ... measured from the edge; site = x (left) or n + 1 - x (right)
  auto amplitude = [&](int x) { return std::fabs(u(from_left ? x - 1 : n - x)); };
  double weight[2] = {0.0, 0.0};
  for (int x = 1; x <= half; ++x) weight[x % 2] += amplitude(x) * amplitude(x);
  const int parity = weight[1] >= weight[0] ? 1 : 0;

  double peak = 0.0;
  for (int x = 2 - parity; x <= half; x += 2) peak = std::max(peak, amplitude(x));
  const double floor = std::max(kFitAmplitudeFloor * peak, kFitAbsoluteFloor);

  std::vector<double> xs;
  std::vector<double> ys;
  for (int x = 2 - parity; x <= half; x += 2) {
    const double a = amplitude(x);
    if (a < floor) {
      if (xs.empty()) continue;
      break;
    }
    xs.push_back(x);
    ys.push_back(std::log(a));
  }
  if (static_cast<int>(xs.size()) < kMinFitPoints) {
    fail(ErrorKind::fit, "insufficient support for an exponential fit (" +
                             std::to_string(xs.size()) + " points)");
  }

  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) fail(ErrorKind::fit, "edge profile does not decay into the bulk");
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    rss += r * r;
  }

  LocalizationFit fit;
  fit.xi_loc = -1.0 / slope;
  fit.fit_rms = std::sqrt(rss / m);
  fit.n_points = static_cast<int>(xs.size());
  const int x0 = static_cast<int>(xs.front());
  const int x1 = static_cast<int>(xs.back());
  fit.first_site = from_left ? x0 : n + 1 - x1;
  fit.last_site = from_left ? x1 : n + 1 - x0;
  return fit;
}

EdgeStateReport analyze_edge(const SpectralDecomposition& spec, double contrast) {
  EdgeStateReport report = find_edge_states(spec, contrast);
  if (!report.topological() || report.edge_side == EdgeSide::hybridized) return report;
  try {
    const LocalizationFit fit = fit_localization_length(spec, report);
    report.xi_loc = fit.xi_loc;
    report.fit_rms = fit.fit_rms;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::fit) throw;
  }
  return report;
}

double ssh_localization_length(double dimerization) {
  if (!(dimerization > 0.0 && dimerization < 1.0)) {
    fail(ErrorKind::domain, "SSH localization length needs 0 < delta < 1");
  }
  return -2.0 / std::log((1.0 - dimerization) / (1.0 + dimerization));
}

}  // namespace sshion
