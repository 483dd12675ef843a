#include "greyvar/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "greyvar/errors.hpp"
#include "greyvar/quadrature.hpp"

namespace greyvar {

std::string to_string(WeightKind kind) {
  return kind == WeightKind::Indicator ? "indicator" : "plateau";
}

std::string to_string(Smoothness s) { return s == Smoothness::C0 ? "C0" : "C3"; }

double smoothstep7(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x4 = x * x * x * x;
  return x4 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

double smoothstep7_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double x3 = x * x * x;
  return 140.0 * x3 * (1.0 - x) * (1.0 - x) * (1.0 - x);
}

WeightFunction::WeightFunction(WeightKind kind, double beta, double beta_inner,
                               double omega_inner, double omega, double amplitude)
    : kind_(kind),
      beta_(beta),
      beta_inner_(beta_inner),
      omega_inner_(omega_inner),
      omega_(omega),
      amplitude_(amplitude) {
  if (!(beta > 0.0 && beta < omega && omega < 1.0)) {
    throw DomainError("weight function needs 0 < beta < omega < 1");
  }
  if (!(beta <= beta_inner && beta_inner <= omega_inner && omega_inner <= omega)) {
    throw DomainError("weight function needs beta <= beta' <= omega' <= omega");
  }
  if (kind == WeightKind::SmoothPlateau && !(beta < beta_inner && omega_inner < omega)) {
    throw DomainError("smooth plateau needs beta < beta' and omega' < omega");
  }
  if (amplitude == 0.0 || !std::isfinite(amplitude)) {
    throw DomainError("weight function amplitude must be finite and nonzero");
  }
}

WeightFunction WeightFunction::indicator(double beta, double omega) {
  return WeightFunction(WeightKind::Indicator, beta, beta, omega, omega, 1.0);
}

WeightFunction WeightFunction::smooth_plateau(double beta, double beta_inner,
                                              double omega_inner, double omega) {
  return WeightFunction(WeightKind::SmoothPlateau, beta, beta_inner, omega_inner, omega, 1.0);
}

WeightFunction WeightFunction::scaled(double lambda) const {
  return WeightFunction(kind_, beta_, beta_inner_, omega_inner_, omega_, amplitude_ * lambda);
}

double WeightFunction::operator()(double y) const {
  if (y < beta_ || y > omega_) return 0.0;
  if (kind_ == WeightKind::Indicator) return amplitude_;
  if (y < beta_inner_) return amplitude_ * smoothstep7((y - beta_) / (beta_inner_ - beta_));
  if (y > omega_inner_) return amplitude_ * smoothstep7((omega_ - y) / (omega_ - omega_inner_));
  return amplitude_;
}

double WeightFunction::derivative(double y) const {
  if (kind_ == WeightKind::Indicator || y <= beta_ || y >= omega_) return 0.0;
  if (y < beta_inner_) {
    const double w = beta_inner_ - beta_;
    return amplitude_ * smoothstep7_derivative((y - beta_) / w) / w;
  }
  if (y > omega_inner_) {
    const double w = omega_ - omega_inner_;
    return -amplitude_ * smoothstep7_derivative((omega_ - y) / w) / w;
  }
  return 0.0;
}

std::vector<double> WeightFunction::breakpoints() const {
  if (kind_ == WeightKind::Indicator) return {beta_, omega_};
  return {beta_, beta_inner_, omega_inner_, omega_};
}

std::string WeightFunction::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (kind_ == WeightKind::Indicator) {
    out << "indicator(" << beta_ << "," << omega_ << ")";
  } else {
    out << "plateau(" << beta_ << "," << beta_inner_ << "," << omega_inner_ << "," << omega_
        << ")";
  }
  if (amplitude_ != 1.0) out << "*" << amplitude_;
  return out.str();
}

std::vector<double> offset_breakpoints(const WeightFunction& f, const HalfspaceProfile& profile) {
  std::vector<double> out;
  for (double y : f.breakpoints()) out.push_back(profile.phi(y));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

template <class G>
double integrate_over_support(const WeightFunction& f, const HalfspaceProfile& profile, G&& g) {
  const double lo = -profile.half_width();
  const double hi = profile.half_width();
  return quad::integrate_breaks(g, lo, hi, offset_breakpoints(f, profile), 1e-11);
}

}  // namespace

double alpha_f(const WeightFunction& f, const HalfspaceProfile& profile) {
  const double alpha =
      integrate_over_support(f, profile, [&](double t) { return f(profile.theta(t)); });
  if (std::abs(alpha) < 1e-12) {
    throw NormalizationError("alpha_f vanishes; the surface estimator is undefined");
  }
  return alpha;
}

double alpha_abs_f(const WeightFunction& f, const HalfspaceProfile& profile) {
  return integrate_over_support(f, profile,
                                [&](double t) { return std::abs(f(profile.theta(t))); });
}

double profile_variation(const WeightFunction& f, const HalfspaceProfile& profile) {
  if (f.piecewise_constant()) return 0.0;
  return integrate_over_support(f, profile, [&](double t) {
    return std::abs(f.derivative(profile.theta(t)) * profile.dtheta(t));
  });
}

}  // namespace greyvar
