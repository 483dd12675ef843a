/**
 * @file weight_function.hpp
 * @brief Grey-value weight functions f supported in [beta, omega] ⊂ (0, 1).
 */
#pragma once

#include <string>
#include <vector>

#include "greyvar/psf.hpp"

namespace greyvar {

enum class WeightKind { Indicator, SmoothPlateau };
enum class Smoothness { C0, C3 };

std::string to_string(WeightKind kind);
std::string to_string(Smoothness s);

/// 7th-order smoothstep 35x^4 - 84x^5 + 70x^6 - 20x^7 on [0, 1]; C^3 at both ends.
double smoothstep7(double x);
double smoothstep7_derivative(double x);

class WeightFunction {
 public:
  /// 1 on [beta, omega], 0 elsewhere.
  static WeightFunction indicator(double beta, double omega);
  /// Rises from 0 at beta to 1 at beta_inner, plateau, falls to 0 at omega.
  static WeightFunction smooth_plateau(double beta, double beta_inner, double omega_inner,
                                       double omega);

  /// Same shape multiplied by lambda (lambda != 0).
  WeightFunction scaled(double lambda) const;

  double operator()(double y) const;
  /// f'(y) on the open pieces; 0 for the indicator.
  double derivative(double y) const;

  WeightKind kind() const noexcept { return kind_; }
  Smoothness smoothness() const noexcept {
    return kind_ == WeightKind::Indicator ? Smoothness::C0 : Smoothness::C3;
  }
  double beta() const noexcept { return beta_; }
  double omega() const noexcept { return omega_; }
  double beta_inner() const noexcept { return beta_inner_; }
  double omega_inner() const noexcept { return omega_inner_; }
  double amplitude() const noexcept { return amplitude_; }
  /// True when f is constant on its support (the indicator).
  bool piecewise_constant() const noexcept { return kind_ == WeightKind::Indicator; }
  /// Grey values where f or one of its derivatives is not smooth, ascending.
  std::vector<double> breakpoints() const;

  std::string describe() const;

 private:
  WeightFunction(WeightKind kind, double beta, double beta_inner, double omega_inner,
                 double omega, double amplitude);

  WeightKind kind_;
  double beta_;
  double beta_inner_;
  double omega_inner_;
  double omega_;
  double amplitude_;
};

/// alpha_f = int f(theta^H(t)) dt. Throws NormalizationError when |alpha_f| < 1e-12.
double alpha_f(const WeightFunction& f, const HalfspaceProfile& profile);
/// alpha_{|f|} = int |f(theta^H(t))| dt.
double alpha_abs_f(const WeightFunction& f, const HalfspaceProfile& profile);
/// int |(f o theta^H)'(t)| dt over the open pieces (jumps at beta, omega excluded).
double profile_variation(const WeightFunction& f, const HalfspaceProfile& profile);
/// Offsets t where theta^H(t) hits a breakpoint of f, ascending.
std::vector<double> offset_breakpoints(const WeightFunction& f, const HalfspaceProfile& profile);

}  // namespace greyvar
