/**
 * @file phantom.hpp
 * @brief Test sets X with exactly computable blurred intensities theta_a^X = 1_X * rho_a.
 */
#pragma once

#include <string>

#include "greyvar/lattice.hpp"
#include "greyvar/psf.hpp"
#include "greyvar/weight_function.hpp"

namespace greyvar {

enum class PhantomKind { HalfSpace, Ball, TransformedBall };

std::string to_string(PhantomKind kind);

class Phantom {
 public:
  /// H_u = {x : x.u <= 0}; `normal` is normalized.
  static Phantom half_space(const Point& normal);
  /// B(R) centred at the origin.
  static Phantom ball(int dim, double radius);
  /// s B(R) + center.
  static Phantom transformed_ball(int dim, double radius, double scale, const Point& center);

  PhantomKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool is_ball() const noexcept { return kind_ != PhantomKind::HalfSpace; }
  /// Radius of the (scaled) ball.
  double radius() const;
  double base_radius() const noexcept { return radius_; }
  double scale() const noexcept { return scale_; }
  const Point& center() const noexcept { return center_; }
  const Point& normal() const noexcept { return normal_; }

  /// omega_d R^{d-1}. Throws DomainError for the half-space.
  double surface_area() const;
  double volume() const;
  /// R^{-(d-1)}; zero for the half-space.
  double gaussian_curvature() const;
  bool contains(const Point& x) const;
  /// Signed distance to the boundary, positive outside.
  double signed_distance(const Point& x) const;

 private:
  Phantom(PhantomKind kind, int dim, double radius, double scale, Point center, Point normal);

  PhantomKind kind_;
  int dim_;
  double radius_;
  double scale_;
  Point center_;
  Point normal_;
};

/// Fraction of the sphere of radius s centred at distance r from the origin that lies
/// inside B(R).
double cap_fraction(int dim, double r, double s, double R);

/// theta_a^{B(R)} at distance r from the centre, by 1-D radial quadrature (abs. tol 1e-11).
double ball_intensity(const Psf& psf, double R, double a, double r);

/// theta_a^X(x). Half-spaces go through the tabulated profile, balls through
/// ball_intensity. Throws DomainError for a <= 0.
double intensity(const Phantom& phantom, const HalfspaceProfile& profile, double a,
                 const Point& x);

struct GapResult {
  bool in_zone = false;  // both grey values inside [beta, omega]
  double gap = 0.0;      // |f(theta_a^X(x + t n)) - f(theta_a^{H_x}(x + t n))|
  double grey_set = 0.0;
  double grey_halfspace = 0.0;
};

/// Compares f o theta_a^X with its supporting half-space approximation at offset t
/// along the outward normal of a boundary point.
GapResult halfspace_gap(const Phantom& phantom, const HalfspaceProfile& profile,
                        const WeightFunction& f, double a, double t);

struct TransitionOffsets {
  double t_minus;  // theta_a^X(x + t n) = omega
  double t_plus;   // theta_a^X(x + t n) = beta
};

/// Offsets along the outward normal where the intensity crosses omega and beta.
/// Throws BracketError when the intensity does not cross monotonically.
TransitionOffsets transition_offsets(const Phantom& phantom, const HalfspaceProfile& profile,
                                     const WeightFunction& f, double a);

}  // namespace greyvar
