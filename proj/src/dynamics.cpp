#include "sshion/dynamics.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "sshion/errors.hpp"

namespace sshion {
namespace {

struct LinearFit {
  double c1, c2, residual;
};

// Weighted least squares of sqrt(P) on (x, 1/N) with relative weights.
LinearFit fit_amplitudes(const std::vector<SurvivalPoint>& pts, int n, double beta) {
  const int m = static_cast<int>(pts.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    const double y = std::sqrt(pts[i].p);
    a(i, 0) = std::pow(pts[i].xi_loc, -0.5 * beta) / y;
    a(i, 1) = 1.0 / (n * y);
    b(i) = 1.0;
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1), (a * c - b).squaredNorm()};
}

}  // namespace

Eigen::VectorXcd single_excitation_amplitudes(const SpectralDecomposition& spec, double t) {
  const int n = spec.size();
  Eigen::VectorXcd weights(n);
  for (int k = 0; k < n; ++k) {
    weights(k) = spec.modes(0, k) * std::polar(1.0, -2.0 * spec.energies(k) * t);
  }
  return spec.modes.cast<std::complex<double>>() * weights;
}

QuenchResult evolve_single_excitation(const SpectralDecomposition& spec,
                                      const std::vector<double>& times) {
  QuenchResult out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      fail(ErrorKind::domain, "times must be non-negative and ascending");
    }
  }
  out.times = times;
  out.survival.reserve(times.size());
  for (double t : times) {
    const Eigen::VectorXcd c = single_excitation_amplitudes(spec, t);
    const double p1 = std::norm(c(0));
    out.survival.push_back(p1 * p1);
    out.max_norm_error = std::max(out.max_norm_error, std::fabs(c.squaredNorm() - 1.0));
  }
  out.long_time_average = long_time_survival(spec);
  return out;
}

double long_time_survival(const SpectralDecomposition& spec, double cluster_tolerance) {
  const int n = spec.size();
  if (n == 0) return 0.0;
  const double tol = cluster_tolerance * spec.energies.cwiseAbs().maxCoeff();
  double sum = 0.0;
  double cluster = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k > 0 && spec.energies(k) - spec.energies(k - 1) > tol) {
      sum += cluster * cluster;
      cluster = 0.0;
    }
    cluster += spec.modes(0, k) * spec.modes(0, k);
  }
  sum += cluster * cluster;
  return sum * sum;
}

double dephased_survival(const SpectralDecomposition& spec, double delta0, int samples) {
  if (!(std::fabs(delta0) > 0.0)) fail(ErrorKind::gapless, "dephasing window needs a finite gap");
  if (samples < 2) fail(ErrorKind::domain, "need at least two samples");
  const double t0 = 10.0 / std::fabs(delta0);
  const double t1 = 100.0 / std::fabs(delta0);
  double avg = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    avg += std::norm(single_excitation_amplitudes(spec, t)(0));
  }
  avg /= samples;
  return avg * avg;
}

SurvivalFit fit_survival_power_law(const std::vector<SurvivalPoint>& points, int n_sites) {
  if (points.size() < 5) fail(ErrorKind::fit, "power-law fit needs at least 5 points");
  if (n_sites < 1) fail(ErrorKind::domain, "n_sites must be positive");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : points) {
    if (!(p.xi_loc > 0.0) || !(p.p > 0.0)) fail(ErrorKind::fit, "xi_loc and P must be positive");
    lo = std::min(lo, p.xi_loc);
    hi = std::max(hi, p.xi_loc);
  }
  if (hi < 3.0 * lo) fail(ErrorKind::fit, "xi_loc spread below a factor of 3");

  SurvivalFit out;
  out.inv_xi_min = 1.0 / hi;
  out.inv_xi_max = 1.0 / lo;

  // Log-log slope.
  const double m = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += std::log(p.xi_loc);
    my += std::log(p.p);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (std::log(p.xi_loc) - mx) * (std::log(p.xi_loc) - mx);
    sxy += (std::log(p.xi_loc) - mx) * (std::log(p.p) - my);
  }
  out.beta_loglog = -sxy / sxx;

  const LinearFit fixed = fit_amplitudes(points, n_sites, 4.0);
  out.c1_fixed = fixed.c1;
  out.c2_fixed = fixed.c2;

  // Profile the residual over beta: coarse scan, then Brent around the best node.
  auto residual = [&](double beta) { return fit_amplitudes(points, n_sites, beta).residual; };
  constexpr double kBetaLo = 0.5, kBetaHi = 10.0;
  constexpr int kScan = 96;
  int best = 0;
  double best_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double r = residual(kBetaLo + (kBetaHi - kBetaLo) * i / kScan);
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  const double step = (kBetaHi - kBetaLo) / kScan;
  const double a = kBetaLo + step * std::max(best - 1, 0);
  const double b = kBetaLo + step * std::min(best + 1, kScan);
  const auto [beta, r] = boost::math::tools::brent_find_minima(residual, a, b, 30);
  const LinearFit free = fit_amplitudes(points, n_sites, beta);
  out.beta = beta;
  out.c1 = free.c1;
  out.c2 = free.c2;
  out.rms = std::sqrt(r / m);
  if (!(out.beta > 0.0)) fail(ErrorKind::fit, "non-positive power-law exponent");
  return out;
}

}  // namespace sshion
