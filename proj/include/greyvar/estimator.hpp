/**
 * @file estimator.hpp
 * @brief Grey-scale local surface estimator and volume-estimator baselines.
 *
 *   S0 = a^{-1} b^d sum_z f(theta_a^X(z)),   S = c_L alpha_f^{-1} S0,
 *   V_grey = b^d c_L sum_z theta_a^X(z),      V_bin = b^d c_L #(X ∩ points).
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "greyvar/lattice.hpp"
#include "greyvar/phantom.hpp"
#include "greyvar/radial_weight.hpp"

namespace greyvar {

struct EstimateResult {
  double estimate = 0.0;  // S
  double raw = 0.0;       // S0
  double alpha = 0.0;
  std::int64_t support_points = 0;  // points with f(theta) != 0
  Placement placement;
};

/// D_eff with rho-mass outside B(D_eff) at most 1e-6 min(beta, 1 - omega).
double effective_radius(const Psf& psf, const WeightFunction& f);

/// Bounding box of X ⊕ B(a D_eff + 2 b diam(C_L)).
Box default_window(const Phantom& phantom, double reach, const Placement& placement);

/// Throws CoverageError unless the window contains X ⊕ B(reach). Half-spaces pass.
void check_coverage(const Phantom& phantom, double reach, const Box& window);

/// Surface estimator bound to one (phantom, psf, f, a). Balls use a tabulated
/// radial weight and only visit lattice points in the blur annulus; half-spaces
/// evaluate the profile at every point of the window.
class SurfaceEstimator {
 public:
  SurfaceEstimator(Phantom phantom, const HalfspaceProfile& profile, WeightFunction f, double a,
                   int table_nodes = RadialWeight::kDefaultNodes);

  double alpha() const noexcept { return alpha_; }
  double scale() const noexcept { return a_; }
  const Phantom& phantom() const noexcept { return phantom_; }
  /// Ball only: g_a as a radial table.
  const RadialWeight& radial() const;
  /// a D_eff.
  double reach() const noexcept { return reach_; }
  /// (a alpha_f)^{-1} int g_a: the mean over uniform translations (balls only).
  double expected() const;

  EstimateResult estimate(const Placement& placement, const Box& window) const;
  EstimateResult estimate(const Placement& placement) const;

 private:
  Phantom phantom_;
  const HalfspaceProfile* profile_;
  WeightFunction f_;
  double a_;
  double alpha_;
  double reach_;
  std::shared_ptr<const RadialWeight> radial_;
};

EstimateResult estimate_surface(const Phantom& phantom, const HalfspaceProfile& profile,
                                const WeightFunction& f, double a, const Placement& placement,
                                const Box& window);

/// Grey volume estimator for a ball, bound to one (phantom, psf, a).
class VolumeEstimator {
 public:
  VolumeEstimator(Phantom phantom, const Psf& psf, double a, int table_nodes = 513);

  double estimate(const Placement& placement, const Box& window) const;
  double estimate(const Placement& placement) const;
  double reach() const noexcept { return reach_; }

 private:
  double theta(double r) const;

  Phantom phantom_;
  double a_;
  double reach_;
  double lo_;
  double step_;
  std::vector<double> table_;
};

double estimate_volume_grey(const Phantom& phantom, const Psf& psf, double a,
                            const Placement& placement, const Box& window);
/// b^d c_L #(X ∩ points ∩ window).
double estimate_volume_binary(const Phantom& phantom, const Placement& placement,
                              const Box& window);
double estimate_volume_binary(const Phantom& phantom, const Placement& placement);

}  // namespace greyvar
