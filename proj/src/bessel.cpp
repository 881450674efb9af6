#include "sshion/bessel.hpp"

#include <cmath>
#include <numbers>

namespace sshion {
namespace {

constexpr double kSeriesLimit = 12.0;

double j0_series(double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > 2) break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion: J0(x) = sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4)).
double j0_asymptotic(double x) {
  const double z = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int n = 1; n < 60; ++n) {
    const double odd = 2.0 * n - 1.0;
    term *= -odd * odd / (n * z);
    if (std::fabs(term) > last) break;  // asymptotic series started to diverge
    last = std::fabs(term);
    // t_n enters P (even n) or Q (odd n) with sign (-1)^(floor(n/2))
    const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    if (n % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (last < 1e-17) break;
  }
  const double phase = x - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(phase) - q * std::sin(phase));
}

}  // namespace

double bessel_j0(double x) {
  x = std::fabs(x);
  if (x < kSeriesLimit) return j0_series(x);
  return j0_asymptotic(x);
}

}  // namespace sshion
