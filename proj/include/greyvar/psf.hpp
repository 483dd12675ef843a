/**
 * @file psf.hpp
 * @brief Radial point-spread functions and the half-space intensity profile.
 *
 * A PSF rho is a radial probability density on R^d. Scaling by a > 0 gives
 * rho_a(x) = a^{-d} rho(x / a). The half-space profile theta^H(t) is the
 * rho-mass of {x : x.u >= t}, i.e. the grey value at signed distance t (in
 * units of a) outside the boundary of a half-space.
 */
#pragma once

#include <span>
#include <string>
#include <vector>

namespace greyvar {

enum class PsfKind { Gaussian, CompactBump, BallIndicator };

std::string to_string(PsfKind kind);

class Psf {
 public:
  /// Isotropic Gaussian with standard deviation sigma per coordinate.
  static Psf gaussian(int dim, double sigma = 1.0);
  /// c_d (1 - |x|^2 / D^2)^3 on |x| <= D; C^2 across the support boundary.
  static Psf compact_bump(int dim, double radius = 1.0);
  /// Uniform density on the ball B(D). Not C^2; only for volume baselines.
  static Psf ball_indicator(int dim, double radius = 1.0);

  PsfKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// sigma for Gaussian, support radius D otherwise.
  double shape() const noexcept { return shape_; }
  bool compact() const noexcept { return kind_ != PsfKind::Gaussian; }

  /// rho(r), r = |x|. Throws DomainError for negative or non-finite r.
  double density(double r) const;
  /// rho_a(r) = a^{-d} rho(r / a).
  double scaled_density(double r, double a) const;
  /// 1-D marginal density m(s) = int rho(s e_1 + y) dy over the orthogonal complement.
  double marginal(double s) const;
  /// Mass of rho outside B(r).
  double mass_outside(double r) const;
  /// Radius beyond which rho is identically zero (compact) or carries < 1e-20 mass.
  double support_radius() const;
  /// Smallest radius D_eff with mass_outside(D_eff) <= tail_mass (D for compact kinds).
  double effective_radius(double tail_mass) const;

  std::string name() const;

 private:
  Psf(PsfKind kind, int dim, double shape);

  PsfKind kind_;
  int dim_;
  double shape_;
  double norm_;  // normalizing constant c_d
};

/// rho(r) for a radius r >= 0.
double eval_rho(const Psf& psf, double r);

/// Tabulated theta^H with its derivative and the inverse phi on (0, 1).
class HalfspaceProfile {
 public:
  static constexpr int kDefaultGridPoints = 4096;

  explicit HalfspaceProfile(const Psf& psf, int grid_points = kDefaultGridPoints);

  const Psf& psf() const noexcept { return psf_; }
  /// Table covers t in [-T, T].
  double half_width() const noexcept { return half_width_; }

  /// theta^H(t): 1 for t <= -T, 0 for t >= T, cubic Hermite in between.
  double theta(double t) const;
  /// (theta^H)'(t) = -m(t) on the grid, Hermite derivative in between.
  double dtheta(double t) const;
  /// Inverse of theta^H on (0, 1), by bisection to 1e-12.
  double phi(double y) const;

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> derivatives() const noexcept { return derivs_; }

 private:
  std::size_t cell(double t) const;

  Psf psf_;
  double half_width_;
  double step_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

HalfspaceProfile halfspace_profile(const Psf& psf,
                                   int grid_points = HalfspaceProfile::kDefaultGridPoints);

/// Grey value -> signed offset; see HalfspaceProfile::phi.
double phi(const HalfspaceProfile& profile, double y);

struct ConditionReport {
  bool smooth_c2 = false;          // rho is C^2 on R^d
  bool compact_support = false;
  bool strictly_decreasing = false;  // (theta^H)' < -1e-12 on the transition zone
  double max_derivative = 0.0;     // sup of (theta^H)' over the transition zone
  bool condition1 = false;         // compact, C^2, strictly decreasing
  bool condition2 = false;         // C^2, strictly decreasing, polynomial decay s > d
  std::string decay;               // tail decay description for condition 2
  bool surface_usable = false;     // one of the two conditions holds
  std::string note;
};

ConditionReport check_conditions(const Psf& psf);
ConditionReport check_conditions(const HalfspaceProfile& profile);

/// Surface area of the unit sphere S^{d-1}.
double sphere_area(int dim);
/// Volume of the unit ball in R^d.
double ball_volume(int dim);

}  // namespace greyvar
