#include "greyvar/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "greyvar/errors.hpp"

namespace greyvar {

namespace {

constexpr double kPi = std::numbers::pi;

double series_integer(int n, double x) {
  const double half = 0.5 * x;
  double term = n == 0 ? 1.0 : half;  // (x/2)^n / n!
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// J_0 and J_1 by Miller's algorithm normalized with J_0 + 2 sum J_{2k} = 1.
void miller(double x, double& j0, double& j1) {
  const int start = 2 * (static_cast<int>(x / 2.0) + 30);
  double next = 0.0;    // j_{k+1}
  double cur = 1e-300;  // j_k
  double norm = 0.0;
  double v0 = 0.0, v1 = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * cur - next;  // j_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      v1 *= 1e-250;
    }
    const int idx = k - 1;
    if (idx > 0 && idx % 2 == 0) norm += 2.0 * cur;
    if (idx == 1) v1 = cur;
  }
  v0 = cur;
  norm += v0;
  j0 = v0 / norm;
  j1 = v1 / norm;
}

double hankel_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  const double eight_x = 8.0 * x;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eight_x);
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series starts diverging
    last = mag;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (mag < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double integer_order(int n, double x) {
  if (x < 8.0) return series_integer(n, x);
  if (x < 25.0) {
    double j0, j1;
    miller(x, j0, j1);
    return n == 0 ? j0 : j1;
  }
  return hankel_asymptotic(n, x);
}

}  // namespace

double bessel_j(double order, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: x must be finite and >= 0");
  if (order == 0.0) return integer_order(0, x);
  if (order == 1.0) return integer_order(1, x);
  if (order == 0.5) {
    if (x == 0.0) return 0.0;
    return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  }
  if (order == 1.5) {
    if (x < 0.5) {
      // (x/2)^{3/2} sum_k (-x^2/4)^k / (k! Gamma(k + 5/2))
      const double half = 0.5 * x;
      double term = std::pow(half, 1.5) / std::tgamma(2.5);
      double sum = term;
      for (int k = 1; k < 40; ++k) {
        term *= -half * half / (k * (k + 1.5));
        sum += term;
        if (std::abs(term) < 1e-20) break;
      }
      return sum;
    }
    return std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x));
  }
  throw DomainError("bessel_j: unsupported order " + std::to_string(order));
}

}  // namespace greyvar
