#include "greyvar/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greyvar/errors.hpp"
#include "greyvar/quadrature.hpp"

namespace greyvar {

std::string to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::HalfSpace: return "halfspace";
    case PhantomKind::Ball: return "ball";
    case PhantomKind::TransformedBall: return "transformed_ball";
  }
  return "unknown";
}

Phantom::Phantom(PhantomKind kind, int dim, double radius, double scale, Point center,
                 Point normal)
    : kind_(kind),
      dim_(dim),
      radius_(radius),
      scale_(scale),
      center_(std::move(center)),
      normal_(std::move(normal)) {
  if (dim != 2 && dim != 3) throw DomainError("phantom dimension must be 2 or 3");
}

Phantom Phantom::half_space(const Point& normal) {
  const double n = normal.norm();
  if (!(n > 0.0)) throw DomainError("half-space normal must be nonzero");
  const auto dim = static_cast<int>(normal.size());
  return Phantom(PhantomKind::HalfSpace, dim, 0.0, 1.0, Point::Zero(dim), normal / n);
}

Phantom Phantom::ball(int dim, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  return Phantom(PhantomKind::Ball, dim, radius, 1.0, Point::Zero(dim), Point::Zero(dim));
}

Phantom Phantom::transformed_ball(int dim, double radius, double scale, const Point& center) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  if (!(scale > 0.0)) throw DomainError("ball scale must be positive");
  if (center.size() != dim) throw DomainError("ball centre has wrong dimension");
  return Phantom(PhantomKind::TransformedBall, dim, radius, scale, center, Point::Zero(dim));
}

double Phantom::radius() const {
  if (!is_ball()) throw DomainError("half-space has no radius");
  return scale_ * radius_;
}

double Phantom::surface_area() const {
  return sphere_area(dim_) * std::pow(radius(), dim_ - 1);
}

double Phantom::volume() const { return ball_volume(dim_) * std::pow(radius(), dim_); }

double Phantom::gaussian_curvature() const {
  return is_ball() ? std::pow(radius(), -(dim_ - 1)) : 0.0;
}

double Phantom::signed_distance(const Point& x) const {
  if (!is_ball()) return x.dot(normal_);
  return (x - center_).norm() - radius();
}

bool Phantom::contains(const Point& x) const { return signed_distance(x) <= 0.0; }

double cap_fraction(int dim, double r, double s, double R) {
  if (s <= 0.0) return r <= R ? 1.0 : 0.0;
  if (r <= 0.0) return s <= R ? 1.0 : 0.0;
  // |x + s v|^2 <= R^2  <=>  cos(angle(v, x)) <= c
  const double c = ((R - r) * (R + r) - s * s) / (2.0 * r * s);
  if (c >= 1.0) return 1.0;
  if (c <= -1.0) return 0.0;
  if (dim == 2) return 1.0 - std::acos(c) / std::numbers::pi;
  return 0.5 * (1.0 + c);
}

double ball_intensity(const Psf& psf, double R, double a, double r) {
  if (!(a > 0.0)) throw DomainError("intensity: scale a must be positive");
  const int d = psf.dim();
  const double reach = psf.support_radius();
  const double area = sphere_area(d);
  r = std::abs(r);
  auto integrand = [&](double u) {
    return psf.density(u) * cap_fraction(d, r, a * u, R) * area * std::pow(u, d - 1);
  };
  return std::clamp(
      quad::integrate_breaks(integrand, 0.0, reach, {std::abs(R - r) / a, (R + r) / a}, 1e-11),
      0.0, 1.0);
}

double intensity(const Phantom& phantom, const HalfspaceProfile& profile, double a,
                 const Point& x) {
  if (!(a > 0.0)) throw DomainError("intensity: scale a must be positive");
  if (x.size() != phantom.dim()) throw DomainError("intensity: point has wrong dimension");
  if (!phantom.is_ball()) return profile.theta(x.dot(phantom.normal()) / a);
  return ball_intensity(profile.psf(), phantom.radius(), a, (x - phantom.center()).norm());
}

namespace {

// grey value at offset t along the outward normal of a boundary point
double normal_intensity(const Phantom& phantom, const HalfspaceProfile& profile, double a,
                        double t) {
  if (!phantom.is_ball()) return profile.theta(t / a);
  return ball_intensity(profile.psf(), phantom.radius(), a, phantom.radius() + t);
}

double solve_level(const Phantom& phantom, const HalfspaceProfile& profile, double a,
                   double level) {
  const double reach = a * profile.psf().support_radius();
  double lo = -reach;
  if (phantom.is_ball()) lo = std::max(lo, -phantom.radius());
  double hi = reach;
  const double g_lo = normal_intensity(phantom, profile, a, lo);
  const double g_hi = normal_intensity(phantom, profile, a, hi);
  if (!(g_lo >= level && g_hi <= level)) {
    throw BracketError("transition_offsets: intensity does not cross the grey level");
  }
  // coarse monotonicity check along the normal
  double prev = g_lo;
  constexpr int kSamples = 64;
  for (int i = 1; i <= kSamples; ++i) {
    const double t = lo + (hi - lo) * i / kSamples;
    const double g = normal_intensity(phantom, profile, a, t);
    if (g > prev + 1e-10) {
      throw BracketError("transition_offsets: intensity not monotone along the normal");
    }
    prev = g;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (normal_intensity(phantom, profile, a, mid) >= level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GapResult halfspace_gap(const Phantom& phantom, const HalfspaceProfile& profile,
                        const WeightFunction& f, double a, double t) {
  if (!(a > 0.0)) throw DomainError("halfspace_gap: scale a must be positive");
  GapResult out;
  out.grey_set = normal_intensity(phantom, profile, a, t);
  out.grey_halfspace = profile.theta(t / a);
  const auto inside = [&](double y) { return y >= f.beta() && y <= f.omega(); };
  out.in_zone = inside(out.grey_set) && inside(out.grey_halfspace);
  out.gap = std::abs(f(out.grey_set) - f(out.grey_halfspace));
  return out;
}

TransitionOffsets transition_offsets(const Phantom& phantom, const HalfspaceProfile& profile,
                                     const WeightFunction& f, double a) {
  if (!(a > 0.0)) throw DomainError("transition_offsets: scale a must be positive");
  return {solve_level(phantom, profile, a, f.omega()), solve_level(phantom, profile, a, f.beta())};
}

}  // namespace greyvar
