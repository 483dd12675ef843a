/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre rules and adaptive composite quadrature.
 *
 * The adaptive driver compares a 15-point Gauss-Legendre panel against the
 * sum over its two halves and bisects until the difference drops below the
 * local share of the absolute tolerance.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace greyvar::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes computed by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Shared 15-point rule.
const GaussRule& gl15();

template <class F>
double panel(F&& f, double lo, double hi, const GaussRule& rule) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

namespace detail {

template <class F>
double adaptive(F& f, double lo, double hi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double left = panel(f, lo, mid, gl15());
  const double right = panel(f, mid, hi, gl15());
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= tol || mid <= lo || mid >= hi) {
    return refined;
  }
  return adaptive(f, lo, mid, left, 0.5 * tol, depth - 1) +
         adaptive(f, mid, hi, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre integral of f over [lo, hi].
template <class F>
double integrate(F&& f, double lo, double hi, double abs_tol = 1e-10, int max_depth = 40) {
  if (hi == lo) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, abs_tol, max_depth);
  const double whole = panel(f, lo, hi, gl15());
  return detail::adaptive(f, lo, hi, whole, abs_tol, max_depth);
}

/// Integral over [lo, hi] split at interior breakpoints (kinks, jumps).
template <class F>
double integrate_breaks(F&& f, double lo, double hi, std::vector<double> breaks,
                        double abs_tol = 1e-10, int max_depth = 40) {
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double x) { return !(x > lo && x < hi); }),
               breaks.end());
  std::sort(breaks.begin(), breaks.end());
  double sum = 0.0;
  double left = lo;
  const double share = abs_tol / static_cast<double>(breaks.size() + 1);
  for (double x : breaks) {
    sum += integrate(f, left, x, share, max_depth);
    left = x;
  }
  return sum + integrate(f, left, hi, share, max_depth);
}

/// Fixed composite rule: `panels` equal panels of `rule` on [lo, hi].
struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

void append_panels(Nodes& out, double lo, double hi, int panels, const GaussRule& rule);

}  // namespace greyvar::quad
