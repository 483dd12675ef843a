#pragma once

namespace greyvar {

/// Bessel function of the first kind J_nu(x) for nu in {0, 1, 1/2, 3/2} and x >= 0.
///
/// Integer orders use the power series for x < 8, Miller's backward recurrence
/// for 8 <= x < 25 and the Hankel asymptotic expansion beyond. Half-integer
/// orders use their elementary closed forms (series near the origin for 3/2).
/// Absolute error stays below 1e-12 on [0, 500].
double bessel_j(double order, double x);

}  // namespace greyvar
