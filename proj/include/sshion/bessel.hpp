#pragma once

namespace sshion {

/// Zeroth-order Bessel function of the first kind.
///
/// Power series (evaluated in extended precision) for |x| < 12, Hankel
/// asymptotic expansion beyond. Absolute error is below 1e-15 on [0, 10]
/// and below 1e-10 at the crossover.
double bessel_j0(double x);

}  // namespace sshion
