#include "greyvar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greyvar/bessel.hpp"
#include "greyvar/errors.hpp"
#include "greyvar/quadrature.hpp"

namespace greyvar {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> pieces(double lo, double hi, std::vector<double> breaks) {
  std::vector<double> cuts{lo};
  std::sort(breaks.begin(), breaks.end());
  for (double x : breaks) {
    if (x > cuts.back() && x < hi) cuts.push_back(x);
  }
  cuts.push_back(hi);
  return cuts;
}

int panel_count(double length, double freq, int minimum) {
  const double quarter = 4.0 * std::abs(freq) * length;
  return std::max(minimum, static_cast<int>(std::ceil(quarter)));
}

double phase_nu(int dim) { return -(dim - 1) * kPi / 4.0; }

}  // namespace

RadialFourier::RadialFourier(int dim, std::function<double(double)> g, double r_min,
                             double r_max, std::vector<double> breaks)
    : dim_(dim), g_(std::move(g)), lo_(r_min), hi_(r_max), breaks_(std::move(breaks)) {
  if (dim != 2 && dim != 3) throw DomainError("radial transform: dimension must be 2 or 3");
  if (!(r_min >= 0.0 && r_max >= r_min)) throw DomainError("radial transform: bad support");
}

double RadialFourier::volume_integral() const {
  const auto cuts = pieces(lo_, hi_, breaks_);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    sum += quad::integrate([&](double r) { return g_(r) * std::pow(r, dim_ - 1); }, cuts[i],
                           cuts[i + 1], 1e-14, 30);
  }
  return sphere_area(dim_) * sum;
}

double RadialFourier::transform(double rho) const {
  if (!(rho >= 0.0)) throw DomainError("radial transform: frequency must be >= 0");
  if (rho == 0.0) return volume_integral();
  const double order = dim_ / 2.0 - 1.0;
  const double w = 2.0 * kPi * rho;
  auto integrand = [&](double r) {
    return g_(r) * bessel_j(order, w * r) * std::pow(r, dim_ / 2.0);
  };
  const auto cuts = pieces(lo_, hi_, breaks_);
  const auto& rule = quad::gl15();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int n = panel_count(len, rho, 8);
    for (int k = 0; k < n; ++k) {
      sum += quad::panel(integrand, cuts[i] + len * k / n, cuts[i] + len * (k + 1) / n, rule);
    }
  }
  return 2.0 * kPi * std::pow(rho, -(dim_ - 2) / 2.0) * sum;
}

std::complex<double> oscillatory_integral(const std::function<double(double)>& h, double lo,
                                          double hi, double r, std::vector<double> breaks,
                                          double abs_tol) {
  const auto cuts = pieces(lo, hi, std::move(breaks));
  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int n = panel_count(len, r, 1);
    for (int k = 0; k < n; ++k) {
      panels.emplace_back(cuts[i] + len * k / n, cuts[i] + len * (k + 1) / n);
    }
  }
  const double share = abs_tol / static_cast<double>(std::max<std::size_t>(1, panels.size()));
  const double w = 2.0 * kPi * r;
  double re = 0.0;
  double im = 0.0;
  for (const auto& [a, b] : panels) {
    re += quad::integrate([&](double t) { return h(t) * std::cos(w * t); }, a, b, share, 20);
    im -= quad::integrate([&](double t) { return h(t) * std::sin(w * t); }, a, b, share, 20);
  }
  return {re, im};
}

namespace {

std::pair<double, double> profile_support(const WeightFunction& f,
                                          const HalfspaceProfile& profile) {
  return {profile.phi(f.omega()), profile.phi(f.beta())};
}

}  // namespace

std::complex<double> fourier_profile(const WeightFunction& f, const HalfspaceProfile& profile,
                                     double r) {
  const auto [lo, hi] = profile_support(f, profile);
  return oscillatory_integral([&](double t) { return f(profile.theta(t)); }, lo, hi, r,
                              offset_breakpoints(f, profile), 1e-13);
}

std::complex<double> fourier_profile_indicator(const WeightFunction& f,
                                               const HalfspaceProfile& profile, double r) {
  if (!f.piecewise_constant()) {
    throw DomainError("fourier_profile_indicator: weight is not piecewise constant");
  }
  const auto [lo, hi] = profile_support(f, profile);
  if (r == 0.0) return f.amplitude() * (hi - lo);
  const std::complex<double> i(0.0, 1.0);
  const double w = 2.0 * kPi * r;
  return f.amplitude() * (std::exp(-i * w * lo) - std::exp(-i * w * hi)) / (i * w);
}

double fourier_profile_abs2(const WeightFunction& f, const HalfspaceProfile& profile, double r) {
  return std::norm(f.piecewise_constant() ? fourier_profile_indicator(f, profile, r)
                                          : fourier_profile(f, profile, r));
}

double ball_indicator_transform(int dim, double radius, double rho) {
  if (dim != 2 && dim != 3) throw DomainError("ball transform: dimension must be 2 or 3");
  if (!(rho >= 0.0)) throw DomainError("ball transform: frequency must be >= 0");
  if (rho == 0.0) return ball_volume(dim) * std::pow(radius, dim);
  const double x = 2.0 * kPi * radius * rho;
  if (dim == 3 && x < 1e-3) {
    // R^3 (rho R)^{-3/2} J_{3/2}(x) loses digits near 0; use the series of the 3-D form
    return ball_volume(3) * std::pow(radius, 3) * (1.0 - x * x / 10.0 + x * x * x * x / 280.0);
  }
  return std::pow(radius / rho, dim / 2.0) * bessel_j(dim / 2.0, x);
}

double ball_fourier_exact(const RadialWeight& g, double rho, TransformMethod method) {
  if (g.empty()) return 0.0;
  if (method == TransformMethod::Auto && g.weight().piecewise_constant()) {
    return g.weight().amplitude() * (ball_indicator_transform(g.dim(), g.outer(), rho) -
                                     ball_indicator_transform(g.dim(), g.inner(), rho));
  }
  RadialFourier ft(g.dim(), [&](double r) { return g(r); }, g.inner(), g.outer());
  return ft.transform(rho);
}

double ball_fourier_exact(const Psf& psf, double radius, double a, const WeightFunction& f,
                          double rho, TransformMethod method) {
  return ball_fourier_exact(RadialWeight(psf, radius, a, f, 1025), rho, method);
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Equal: return "equal";
    case Regime::FineLattice: return "fine";
    case Regime::CoarseLattice: return "coarse";
  }
  return "unknown";
}

Regime parse_regime(const std::string& name) {
  if (name == "equal") return Regime::Equal;
  if (name == "fine") return Regime::FineLattice;
  if (name == "coarse") return Regime::CoarseLattice;
  throw DomainError("unknown regime '" + name + "'");
}

namespace {

// J = int f(theta^H(t)) (R + a t)^{(d-1)/2} e^{2 pi i a t rho} dt
std::complex<double> weighted_profile_transform(double radius, double a, double rho,
                                                const WeightFunction& f,
                                                const HalfspaceProfile& profile) {
  const int d = profile.psf().dim();
  const auto [lo, hi] = profile_support(f, profile);
  auto h = [&](double t) {
    return f(profile.theta(t)) * std::pow(radius + a * t, (d - 1) / 2.0);
  };
  return oscillatory_integral(h, lo, hi, -a * rho, offset_breakpoints(f, profile), 1e-13);
}

}  // namespace

AsymptoticValue ball_fourier_asymptotic(double radius, double a, double b, double xi_norm,
                                        const WeightFunction& f, const HalfspaceProfile& profile,
                                        Regime regime) {
  if (!(radius > 0.0 && a > 0.0 && b > 0.0 && xi_norm > 0.0)) {
    throw DomainError("ball_fourier_asymptotic: R, a, b and |xi| must be positive");
  }
  const int d = profile.psf().dim();
  const double rho = xi_norm / b;
  const double nu = phase_nu(d);
  AsymptoticValue out;
  switch (regime) {
    case Regime::Equal: {
      if (std::abs(b / a - 1.0) > 0.5) out.warning = "b differs from a; equal-scale model";
      const auto j = weighted_profile_transform(radius, a, rho, f, profile);
      const double phase = 2.0 * kPi * radius * rho + nu;
      const double integral = (std::exp(std::complex<double>(0.0, phase)) * j).real();
      out.abs2 = 4.0 * std::pow(rho, 1 - d) * a * a * integral * integral;
      break;
    }
    case Regime::FineLattice: {
      if (b > 0.5 * a) out.warning = "b is not small against a; fine-lattice model";
      const double xb = 2.0 * kPi * (radius + a * profile.phi(f.beta())) * rho + nu;
      const double xw = 2.0 * kPi * (radius + a * profile.phi(f.omega())) * rho + nu;
      const double fb = f.piecewise_constant() ? f.amplitude() : f(f.beta());
      const double fw = f.piecewise_constant() ? f.amplitude() : f(f.omega());
      const double s = fb * std::sin(xb) - fw * std::sin(xw);
      out.abs2 = std::pow(rho, -d - 1) * std::pow(radius, d - 1) * s * s / (kPi * kPi);
      break;
    }
    case Regime::CoarseLattice: {
      if (b < 2.0 * a) out.warning = "b is not large against a; coarse-lattice model";
      const double alpha = alpha_f(f, profile);
      const double c = std::cos(2.0 * kPi * radius * rho + nu);
      out.abs2 = 4.0 * std::pow(rho, 1 - d) * std::pow(radius, d - 1) * a * a * alpha * alpha * c * c;
      break;
    }
  }
  return out;
}

double ball_fourier_envelope(double radius, double a, double rho, const WeightFunction& f,
                             const HalfspaceProfile& profile) {
  const int d = profile.psf().dim();
  return 4.0 * std::pow(rho, 1 - d) * a * a *
         std::norm(weighted_profile_transform(radius, a, rho, f, profile));
}

}  // namespace greyvar
