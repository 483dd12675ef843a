/**
 * @file radial_weight.hpp
 * @brief Tabulated g_a(r) = f(theta_a^{B(R)}(r)) for a ball.
 *
 * The blurred ball intensity is radially non-increasing, so g_a vanishes
 * outside the annulus [r_omega, r_beta] where theta crosses omega and beta.
 * theta is tabulated on that annulus and interpolated by cubic Lagrange
 * polynomials; f is applied after interpolation so that jumps of f at beta
 * and omega sit exactly on the annulus boundary.
 */
#pragma once

#include <vector>

#include "greyvar/psf.hpp"
#include "greyvar/weight_function.hpp"

namespace greyvar {

class RadialWeight {
 public:
  static constexpr int kDefaultNodes = 257;

  RadialWeight(const Psf& psf, double radius, double a, const WeightFunction& f,
               int nodes = kDefaultNodes);

  double radius() const noexcept { return radius_; }
  double scale() const noexcept { return a_; }
  int dim() const noexcept { return dim_; }
  /// Radius where theta = omega (0 if theta(0) <= omega).
  double inner() const noexcept { return inner_; }
  /// Radius where theta = beta (0 if theta(0) <= beta, i.e. g vanishes).
  double outer() const noexcept { return outer_; }
  bool empty() const noexcept { return outer_ <= inner_; }

  /// Interpolated theta on [inner, outer].
  double theta(double r) const;
  /// g_a(r); zero outside [inner, outer].
  double operator()(double r) const;
  /// int_{R^d} g_a(|x|) dx.
  double integral() const noexcept { return integral_; }
  const WeightFunction& weight() const noexcept { return f_; }

 private:
  int dim_;
  double radius_;
  double a_;
  WeightFunction f_;
  double inner_ = 0.0;
  double outer_ = 0.0;
  double step_ = 0.0;
  std::vector<double> table_;
  double integral_ = 0.0;
};

/// Radius where theta_a^{B(R)} equals `level`, by TOMS 748 on the outward ray.
/// Returns 0 when theta(0) <= level. Throws BracketError otherwise if no sign change.
double ball_level_radius(const Psf& psf, double radius, double a, double level);

}  // namespace greyvar

namespace greyvar {

/// theta_a^{B(R)}(R + t) tabulated over a uniform grid of radii R in [r_min, r_max] and
/// offsets t in [t_lo, t_hi], interpolated by tensor cubic Lagrange polynomials. Used when
/// the radius changes per replicate.
class BallIntensityFamily {
 public:
  BallIntensityFamily(const Psf& psf, double r_min, double r_max, double a, double t_lo,
                      double t_hi, int radius_nodes = 33, int offset_nodes = 257);

  int dim() const noexcept { return dim_; }
  double offset_lo() const noexcept { return t_lo_; }
  double offset_hi() const noexcept { return t_hi_; }
  /// Interpolated theta at distance r from the centre of B(R); R must lie in the table range.
  double theta(double radius, double r) const;

 private:
  int dim_;
  double r_min_;
  double r_step_;
  int r_nodes_;
  double t_lo_;
  double t_hi_;
  double t_step_;
  int t_nodes_;
  std::vector<double> table_;  // row-major [radius][offset]
};

}  // namespace greyvar
