#include "greyvar/psf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greyvar/errors.hpp"
#include "greyvar/quadrature.hpp"

namespace greyvar {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

}  // namespace

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: break;
  }
  throw DomainError("sphere_area: unsupported dimension " + std::to_string(dim));
}

double ball_volume(int dim) { return sphere_area(dim) / dim; }

std::string to_string(PsfKind kind) {
  switch (kind) {
    case PsfKind::Gaussian: return "gaussian";
    case PsfKind::CompactBump: return "bump";
    case PsfKind::BallIndicator: return "ball";
  }
  return "unknown";
}

Psf::Psf(PsfKind kind, int dim, double shape) : kind_(kind), dim_(dim), shape_(shape), norm_(0.0) {
  check_dim(dim);
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("psf shape parameter must be positive and finite");
  }
  switch (kind) {
    case PsfKind::Gaussian:
      norm_ = std::pow(2.0 * kPi * shape * shape, -0.5 * dim);
      break;
    case PsfKind::CompactBump:
      // omega_d c D^d int_0^1 (1 - u^2)^3 u^{d-1} du = 1
      norm_ = dim == 2 ? 4.0 / (kPi * shape * shape)
                       : 315.0 / (64.0 * kPi * shape * shape * shape);
      break;
    case PsfKind::BallIndicator:
      norm_ = 1.0 / (ball_volume(dim) * std::pow(shape, dim));
      break;
  }
}

Psf Psf::gaussian(int dim, double sigma) { return Psf(PsfKind::Gaussian, dim, sigma); }
Psf Psf::compact_bump(int dim, double radius) { return Psf(PsfKind::CompactBump, dim, radius); }
Psf Psf::ball_indicator(int dim, double radius) {
  return Psf(PsfKind::BallIndicator, dim, radius);
}

double Psf::density(double r) const {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw DomainError("psf density: radius must be finite and non-negative");
  }
  switch (kind_) {
    case PsfKind::Gaussian:
      return norm_ * std::exp(-0.5 * r * r / (shape_ * shape_));
    case PsfKind::CompactBump: {
      if (r >= shape_) return 0.0;
      const double q = 1.0 - (r * r) / (shape_ * shape_);
      return norm_ * q * q * q;
    }
    case PsfKind::BallIndicator:
      return r <= shape_ ? norm_ : 0.0;
  }
  return 0.0;
}

double Psf::scaled_density(double r, double a) const {
  if (!(a > 0.0)) throw DomainError("psf scale a must be positive");
  return std::pow(a, -dim_) * density(r / a);
}

double Psf::marginal(double s) const {
  s = std::abs(s);
  const double reach = support_radius();
  if (s >= reach) return 0.0;
  const double width = std::sqrt(reach * reach - s * s);
  if (kind_ == PsfKind::BallIndicator) {
    // constant integrand over the chord / disc
    return dim_ == 2 ? 2.0 * width * norm_ : kPi * width * width * norm_;
  }
  const double orth_area = sphere_area(dim_ - 1);
  auto integrand = [&](double y) {
    return density(std::sqrt(s * s + y * y)) * std::pow(y, dim_ - 2);
  };
  return orth_area * quad::integrate(integrand, 0.0, width, 1e-15);
}

double Psf::mass_outside(double r) const {
  if (r <= 0.0) return 1.0;
  if (kind_ == PsfKind::Gaussian) {
    const double z = r / shape_;
    if (dim_ == 2) return std::exp(-0.5 * z * z);
    return std::erfc(z / std::numbers::sqrt2) +
           std::sqrt(2.0 / kPi) * z * std::exp(-0.5 * z * z);
  }
  if (r >= shape_) return 0.0;
  auto integrand = [&](double s) { return density(s) * std::pow(s, dim_ - 1); };
  return sphere_area(dim_) * quad::integrate(integrand, r, shape_, 1e-15);
}

double Psf::support_radius() const {
  return kind_ == PsfKind::Gaussian ? 10.0 * shape_ : shape_;
}

double Psf::effective_radius(double tail_mass) const {
  if (compact()) return shape_;
  if (!(tail_mass > 0.0)) throw DomainError("effective_radius: tail mass must be positive");
  double lo = 0.0;
  double hi = support_radius();
  for (int i = 0; i < 200 && hi - lo > 1e-13 * shape_; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mass_outside(mid) <= tail_mass ? hi : lo) = mid;
  }
  return hi;
}

std::string Psf::name() const { return to_string(kind_); }

double eval_rho(const Psf& psf, double r) { return psf.density(r); }

HalfspaceProfile::HalfspaceProfile(const Psf& psf, int grid_points)
    : psf_(psf),
      half_width_(psf.kind() == PsfKind::Gaussian ? 8.0 * psf.shape() : psf.shape()) {
  if (grid_points < 16) throw DomainError("profile grid needs at least 16 points");
  const auto n = static_cast<std::size_t>(grid_points);
  step_ = 2.0 * half_width_ / static_cast<double>(n - 1);
  grid_.resize(n);
  values_.resize(n);
  derivs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid_[i] = -half_width_ + step_ * static_cast<double>(i);
  }
  grid_.back() = half_width_;

  auto m = [this](double s) { return psf_.marginal(s); };
  // Accumulate from the right so theta(T) carries the exact tail.
  double tail = 0.0;
  if (!psf_.compact()) {
    tail = quad::integrate(m, half_width_, psf_.support_radius(), 1e-18);
  }
  values_[n - 1] = tail;
  for (std::size_t i = n - 1; i-- > 0;) {
    tail += quad::integrate(m, grid_[i], grid_[i + 1], 1e-16, 12);
    values_[i] = tail;
  }
  for (std::size_t i = 0; i < n; ++i) derivs_[i] = -m(grid_[i]);
}

std::size_t HalfspaceProfile::cell(double t) const {
  const double pos = (t + half_width_) / step_;
  const auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
  return std::min(idx, grid_.size() - 2);
}

double HalfspaceProfile::theta(double t) const {
  if (t <= -half_width_) return 1.0;
  if (t >= half_width_) return psf_.compact() ? 0.0 : values_.back();
  const std::size_t i = cell(t);
  const double h = step_;
  const double s = (t - grid_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double v = h00 * values_[i] + h10 * h * derivs_[i] + h01 * values_[i + 1] +
                   h11 * h * derivs_[i + 1];
  return std::clamp(v, 0.0, 1.0);
}

double HalfspaceProfile::dtheta(double t) const {
  if (t <= -half_width_ || t >= half_width_) return 0.0;
  const std::size_t i = cell(t);
  const double h = step_;
  const double s = (t - grid_[i]) / h;
  const double s2 = s * s;
  const double d00 = 6.0 * s2 - 6.0 * s;
  const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double d01 = -6.0 * s2 + 6.0 * s;
  const double d11 = 3.0 * s2 - 2.0 * s;
  return (d00 * values_[i] + d01 * values_[i + 1]) / h + d10 * derivs_[i] + d11 * derivs_[i + 1];
}

double HalfspaceProfile::phi(double y) const {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("phi: grey value must lie in (0, 1)");
  double lo = -half_width_;
  double hi = half_width_;
  if (y > theta(lo) || y < theta(hi)) {
    throw InvertibilityError("phi: grey value outside the tabulated range of theta^H");
  }
  // theta(lo) >= y >= theta(hi)
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (theta(mid) >= y ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  if (!(dtheta(t) < -1e-14)) {
    throw InvertibilityError("phi: theta^H is flat at the requested grey value");
  }
  return t;
}

HalfspaceProfile halfspace_profile(const Psf& psf, int grid_points) {
  return HalfspaceProfile(psf, grid_points);
}

double phi(const HalfspaceProfile& profile, double y) { return profile.phi(y); }

ConditionReport check_conditions(const HalfspaceProfile& profile) {
  const Psf& psf = profile.psf();
  ConditionReport report;
  report.compact_support = psf.compact();
  report.smooth_c2 = psf.kind() != PsfKind::BallIndicator;

  double sup = -1.0;
  bool any = false;
  const auto t = profile.grid();
  const auto v = profile.values();
  const auto dv = profile.derivatives();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (v[i] >= 1e-3 && v[i] <= 1.0 - 1e-3) {
      sup = any ? std::max(sup, dv[i]) : dv[i];
      any = true;
    }
  }
  report.max_derivative = sup;
  report.strictly_decreasing = any && sup < -1e-12;

  switch (psf.kind()) {
    case PsfKind::Gaussian:
      report.decay = "s = inf, any s > 2d+1 satisfied";
      break;
    case PsfKind::CompactBump:
      report.decay = "compact support";
      break;
    case PsfKind::BallIndicator:
      report.decay = "compact support (discontinuous)";
      break;
  }
  report.condition1 = report.compact_support && report.smooth_c2 && report.strictly_decreasing;
  // compact support trivially satisfies the polynomial decay requirement
  report.condition2 = report.smooth_c2 && report.strictly_decreasing;
  report.surface_usable = report.condition1 || report.condition2;
  if (!report.surface_usable) {
    report.note = "not C^2; usable only for volume-estimator baselines";
  }
  return report;
}

ConditionReport check_conditions(const Psf& psf) {
  return check_conditions(HalfspaceProfile(psf));
}

}  // namespace greyvar
