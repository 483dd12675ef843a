#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "greyvar/bessel.hpp"
#include "greyvar/errors.hpp"
#include "greyvar/quadrature.hpp"
#include "greyvar/spectral.hpp"
#include "greyvar/stats.hpp"

using namespace greyvar;

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_radial(double r, double s) { return std::exp(-kPi * r * r / (s * s)); }

}  // namespace

TEST(Hankel, GaussianTransformMatchesClosedForm) {
  for (int d : {2, 3}) {
    const double s = 0.7;
    const RadialFourier ft(d, [&](double r) { return gaussian_radial(r, s); }, 0.0, 8.0 * s, {});
    for (double rho : {0.0, 0.3, 1.0, 2.2}) {
      const double exact = std::pow(s, d) * std::exp(-kPi * s * s * rho * rho);
      EXPECT_NEAR(ft.transform(rho), exact, 1e-8 * exact) << d << " " << rho;
    }
    // deep in the tail the error is absolute
    EXPECT_NEAR(ft.transform(4.0), std::pow(s, d) * std::exp(-kPi * s * s * 16.0), 1e-14);
  }
}

TEST(Hankel, PanelRefinementIsStable) {
  // a finer radial split (extra breakpoints) leaves the transform unchanged
  auto g = [](double r) { return r < 1.0 ? std::pow(1.0 - r * r, 3) : 0.0; };
  const RadialFourier coarse(2, g, 0.0, 1.0, {});
  const RadialFourier fine(2, g, 0.0, 1.0, {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875});
  for (double rho : {0.5, 3.0, 17.0}) EXPECT_NEAR(coarse.transform(rho), fine.transform(rho), 1e-9);
}

TEST(Hankel, ParsevalForCompactRadialFunction) {
  const int d = 2;
  auto g = [](double r) { return r < 1.0 ? std::pow(1.0 - r * r, 3) : 0.0; };
  const RadialFourier ft(d, g, 0.0, 1.0, {});
  const double area = sphere_area(d);
  const double space = quad::integrate([&](double r) { return area * r * g(r) * g(r); }, 0.0, 1.0, 1e-14);
  // |F g|^2 decays like rho^{-5 - 2*3}; the truncated tail is far below 1e-5
  const double freq = quad::integrate(
      [&](double rho) { const double v = ft.transform(rho); return area * rho * v * v; }, 0.0,
      40.0, 1e-13);
  EXPECT_NEAR(freq / space, 1.0, 1e-5);
}

TEST(ProfileFourier, AtZeroIsAlpha) {
  const HalfspaceProfile p(Psf::gaussian(2));
  for (const auto& f : {WeightFunction::indicator(0.3, 0.7),
                        WeightFunction::smooth_plateau(0.2, 0.3, 0.7, 0.8)}) {
    EXPECT_NEAR(fourier_profile(f, p, 0.0).real(), alpha_f(f, p), 1e-9);
  }
}

TEST(ProfileFourier, SymmetricIndicatorClosedForm) {
  const HalfspaceProfile p(Psf::gaussian(2));
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const double tau = p.phi(0.3);
  for (double r : {0.1, 0.77, 2.5, 9.0}) {
    const double closed = std::sin(2 * kPi * r * tau) / (kPi * r);
    const auto q = fourier_profile(f, p, r);
    EXPECT_NEAR(q.real(), closed, 1e-9) << r;
    EXPECT_NEAR(q.imag(), 0.0, 1e-9);
    EXPECT_NEAR(fourier_profile_indicator(f, p, r).real(), closed, 1e-12);
  }
}

TEST(ProfileFourier, ConjugateSymmetry) {
  const HalfspaceProfile p(Psf::compact_bump(2));
  const auto f = WeightFunction::smooth_plateau(0.15, 0.3, 0.6, 0.85);
  for (double r : {0.4, 1.3, 5.0}) {
    const auto plus = fourier_profile(f, p, r);
    const auto minus = fourier_profile(f, p, -r);
    EXPECT_NEAR(std::abs(minus - std::conj(plus)), 0.0, 1e-10);
    EXPECT_NEAR(fourier_profile_abs2(f, p, r), std::norm(plus), 1e-10);
  }
}

TEST(BallTransform, BinaryBallClassicalForm) {
  EXPECT_NEAR(ball_indicator_transform(2, 1.0, 1.0), bessel_j(1.0, 2 * kPi), 1e-14);
  EXPECT_NEAR(ball_indicator_transform(2, 1.0, 1.0), std::cyl_bessel_j(1.0, 2 * kPi), 1e-13);
  EXPECT_NEAR(ball_indicator_transform(2, 1.0, 1.0), -0.21238, 1e-5);
  EXPECT_NEAR(ball_indicator_transform(3, 1.0, 1e-6), 4.0 * kPi / 3.0, 1e-9);
  EXPECT_NEAR(ball_indicator_transform(2, 1.0, 0.0), kPi, 1e-14);
}

TEST(BallTransform, ClosedFormMatchesQuadrature) {
  for (int d : {2, 3}) {
    const Psf psf = Psf::gaussian(d);
    const auto f = WeightFunction::indicator(0.3, 0.7);
    const RadialWeight g(psf, 1.0, 0.1, f, 1025);
    for (double rho : {0.0, 0.5, 3.0, 12.0}) {
      const double auto_v = ball_fourier_exact(g, rho);
      const double quad_v = ball_fourier_exact(g, rho, TransformMethod::Quadrature);
      EXPECT_NEAR(auto_v, quad_v, 1e-8 * std::max(1.0, std::abs(auto_v))) << d << " " << rho;
    }
    EXPECT_NEAR(ball_fourier_exact(g, 0.0), g.integral(), 1e-9);
  }
}

TEST(BallTransform, LeadingTermGapDecays) {
  const Psf psf = Psf::compact_bump(2);
  const HalfspaceProfile p(psf);
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const double a = 0.2;
  std::vector<double> rs{10, 20, 40, 80}, gaps;
  for (double R : rs) {
    const double exact = ball_fourier_exact(psf, R, a, f, 1.0);
    const double model = ball_fourier_asymptotic(R, a, a, a, f, p, Regime::Equal).abs2;
    gaps.push_back(std::abs(exact * exact - model) / ball_fourier_envelope(R, a, 1.0, f, p));
  }
  EXPECT_GE(-loglog_fit(rs, gaps).slope, 0.8);
}

TEST(BallTransform, LinearInAForIndicator) {
  // at fixed R |xi| the coefficient scales like a alpha_f times the sphere transform
  const Psf psf = Psf::gaussian(2);
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const double rho = 1.3;
  std::vector<double> as{0.1, 0.05, 0.025}, vals;
  for (double a : as) vals.push_back(std::abs(ball_fourier_exact(psf, 1.0, a, f, rho)));
  EXPECT_NEAR(loglog_fit(as, vals).slope, 1.0, 0.05);
  const HalfspaceProfile p(psf);
  const double sphere = 2 * kPi * std::pow(rho, 0.0) * bessel_j(0.0, 2 * kPi * rho);
  EXPECT_NEAR(vals.back() / (0.025 * alpha_f(f, p) * std::abs(sphere)), 1.0, 0.05);
}

TEST(Asymptotic, RegimeNamesRoundTrip) {
  for (Regime r : {Regime::Equal, Regime::FineLattice, Regime::CoarseLattice}) {
    EXPECT_EQ(parse_regime(to_string(r)), r);
  }
  EXPECT_THROW(parse_regime("medium"), DomainError);
}

TEST(Asymptotic, FineLatticeAmplitudeForIndicator) {
  // f(beta) = f(omega) = 1: model amplitude proportional to (sin X_beta - sin X_omega)^2
  const HalfspaceProfile p(Psf::gaussian(2));
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const double R = 1.0, a = 0.1, b = 0.01, xi = 1.0;
  const double rho = xi / b;
  const double nu = -kPi / 4;
  const double xb = 2 * kPi * (R + a * p.phi(0.3)) * rho + nu;
  const double xo = 2 * kPi * (R + a * p.phi(0.7)) * rho + nu;
  const double expected = std::pow(rho, -3) * R / (kPi * kPi) * std::pow(std::sin(xb) - std::sin(xo), 2);
  const auto v = ball_fourier_asymptotic(R, a, b, xi, f, p, Regime::FineLattice);
  EXPECT_NEAR(v.abs2, expected, 1e-12 * std::max(expected, 1e-30));
  EXPECT_TRUE(v.warning.empty());
}

TEST(Asymptotic, EnvelopeAttainedOverASweep) {
  const Psf psf = Psf::compact_bump(2);
  const HalfspaceProfile p(psf);
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const double R = 1.0, xi = 1.0;
  double best = 0.0, worst = 1e9;
  for (int i = 0; i <= 120; ++i) {
    const double a = 0.05 * (1.0 + 0.1 * i / 120.0);
    const double v = ball_fourier_exact(psf, R, a, f, xi / a);
    const double env = 4.0 * std::pow(xi, -1.0) * R * std::pow(a, 3) * fourier_profile_abs2(f, p, xi);
    best = std::max(best, v * v / env);
    worst = std::min(worst, v * v / env);
  }
  EXPECT_NEAR(best, 1.0, 0.1);
  EXPECT_LT(worst, 0.01);
}
