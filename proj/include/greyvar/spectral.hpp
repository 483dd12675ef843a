/**
 * @file spectral.hpp
 * @brief Radial Fourier transforms, the 1-D transform of f o theta^H and ball closed forms.
 *
 * Convention: F(g)(xi) = int g(x) exp(-2 pi i x.xi) dx. For radial g on R^d,
 *   F(g)(rho) = 2 pi rho^{-(d-2)/2} int g(r) J_{d/2-1}(2 pi rho r) r^{d/2} dr.
 */
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "greyvar/radial_weight.hpp"
#include "greyvar/weight_function.hpp"

namespace greyvar {

/// Hankel-form transform of a radial function supported on [r_min, r_max].
class RadialFourier {
 public:
  RadialFourier(int dim, std::function<double(double)> g, double r_min, double r_max,
                std::vector<double> breaks = {});

  int dim() const noexcept { return dim_; }
  /// F(g)(rho); rho = 0 gives the volume integral.
  double transform(double rho) const;
  /// int g(|x|) dx.
  double volume_integral() const;

 private:
  int dim_;
  std::function<double(double)> g_;
  double lo_;
  double hi_;
  std::vector<double> breaks_;
};

/// int h(t) exp(-2 pi i r t) dt over [lo, hi] with panels no wider than a quarter period.
std::complex<double> oscillatory_integral(const std::function<double(double)>& h, double lo,
                                          double hi, double r, std::vector<double> breaks = {},
                                          double abs_tol = 1e-12);

/// F(f o theta^H)(r) by quarter-period quadrature over {t : theta^H(t) in [beta, omega]}.
std::complex<double> fourier_profile(const WeightFunction& f, const HalfspaceProfile& profile,
                                     double r);
/// Closed form for piecewise-constant f: amplitude (e^{-2 pi i r lo} - e^{-2 pi i r hi}) / (2 pi i r).
std::complex<double> fourier_profile_indicator(const WeightFunction& f,
                                               const HalfspaceProfile& profile, double r);
/// |F(f o theta^H)(r)|^2, closed form for the indicator, quadrature otherwise.
double fourier_profile_abs2(const WeightFunction& f, const HalfspaceProfile& profile, double r);

/// F(1_{B(R)})(rho) = R^{d/2} rho^{-d/2} J_{d/2}(2 pi R rho); V_d R^d at rho = 0.
double ball_indicator_transform(int dim, double radius, double rho);

enum class TransformMethod { Auto, Quadrature };

/// F(g_a)(rho) for g_a = f o theta_a^{B(R)}. Auto uses the annulus closed form when f
/// is piecewise constant; otherwise Hankel quadrature over the tabulated g_a.
double ball_fourier_exact(const RadialWeight& g, double rho,
                          TransformMethod method = TransformMethod::Auto);
double ball_fourier_exact(const Psf& psf, double radius, double a, const WeightFunction& f,
                          double rho, TransformMethod method = TransformMethod::Auto);

enum class Regime { Equal, FineLattice, CoarseLattice };

std::string to_string(Regime regime);
Regime parse_regime(const std::string& name);

struct AsymptoticValue {
  double abs2 = 0.0;
  std::string warning;  // non-empty when (a, b) do not match the regime
};

/// Leading-term model of |F(g_a)(|xi| / b)|^2 for a ball of radius R.
///   Equal:  4 rho^{1-d} a^2 (int f(theta^H(t)) cos(2 pi (R + a t) rho + nu_d) (R + a t)^{(d-1)/2} dt)^2
///   FineLattice: rho^{-d-1} R^{d-1} pi^{-2} (f(beta) sin(X_beta) - f(omega) sin(X_omega))^2
///   CoarseLattice: 4 rho^{1-d} R^{d-1} a^2 alpha_f^2 cos^2(2 pi R rho + nu_d)
/// with rho = |xi| / b, nu_d = -(d - 1) pi / 4 and X_y = 2 pi (R + a phi(y)) rho + nu_d.
AsymptoticValue ball_fourier_asymptotic(double radius, double a, double b, double xi_norm,
                                        const WeightFunction& f, const HalfspaceProfile& profile,
                                        Regime regime);

/// Phase-maximized Equal model: 4 rho^{1-d} a^2 |int f(theta^H(t)) e^{2 pi i a t rho} (R + a t)^{(d-1)/2} dt|^2.
double ball_fourier_envelope(double radius, double a, double rho, const WeightFunction& f,
                             const HalfspaceProfile& profile);

}  // namespace greyvar
