#include "greyvar/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "greyvar/errors.hpp"

namespace greyvar {

namespace {

// Same point set as `placement`, expressed relative to `center`.
Placement recentred(const Placement& placement, const Point& center) {
  if (center.isZero(0.0)) return placement;
  Placement out = placement;
  const Point shift = placement.rotation.transpose() * center / placement.resolution;
  const Point coeffs = placement.lattice.basis().inverse() * (placement.offset - shift);
  const Point frac = coeffs.array() - coeffs.array().floor();
  out.offset = placement.lattice.basis() * frac;
  return out;
}

double cell_diameter(const Lattice& lattice) {
  // longest diagonal of the parallelepiped A[0,1]^d
  const int d = lattice.dim();
  double best = 0.0;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Point v = Point::Zero(d);
    for (int j = 0; j < d; ++j) {
      v += ((mask >> j) & 1 ? 1.0 : -1.0) * lattice.basis().col(j);
    }
    best = std::max(best, v.norm());
  }
  return best;
}

}  // namespace

double effective_radius(const Psf& psf, const WeightFunction& f) {
  return psf.effective_radius(1e-6 * std::min(f.beta(), 1.0 - f.omega()));
}

Box default_window(const Phantom& phantom, double reach, const Placement& placement) {
  const int d = phantom.dim();
  const double pad = reach + 2.0 * placement.resolution * cell_diameter(placement.lattice);
  if (!phantom.is_ball()) {
    // no finite tube: a unit box around the origin
    return {Point::Constant(d, -1.0), Point::Constant(d, 1.0)};
  }
  const double half = phantom.radius() + pad;
  return {phantom.center().array() - half, phantom.center().array() + half};
}

void check_coverage(const Phantom& phantom, double reach, const Box& window) {
  if (!phantom.is_ball()) return;
  const double half = phantom.radius() + reach;
  for (int j = 0; j < phantom.dim(); ++j) {
    if (window.lo[j] > phantom.center()[j] - half || window.hi[j] <= phantom.center()[j] + half) {
      throw CoverageError("observation window clips the blurred boundary zone");
    }
  }
}

SurfaceEstimator::SurfaceEstimator(Phantom phantom, const HalfspaceProfile& profile,
                                   WeightFunction f, double a, int table_nodes)
    : phantom_(std::move(phantom)), profile_(&profile), f_(std::move(f)), a_(a) {
  if (!(a > 0.0)) throw DomainError("estimator: scale a must be positive");
  if (phantom_.dim() != profile.psf().dim()) {
    throw DomainError("estimator: phantom and psf dimensions differ");
  }
  alpha_ = alpha_f(f_, profile);
  reach_ = a * effective_radius(profile.psf(), f_);
  if (phantom_.is_ball()) {
    radial_ = std::make_shared<RadialWeight>(profile.psf(), phantom_.radius(), a, f_, table_nodes);
  }
}

const RadialWeight& SurfaceEstimator::radial() const {
  if (!radial_) throw DomainError("estimator: radial weight defined for balls only");
  return *radial_;
}

double SurfaceEstimator::expected() const { return radial().integral() / (a_ * alpha_); }

EstimateResult SurfaceEstimator::estimate(const Placement& placement, const Box& window) const {
  if (placement.lattice.dim() != phantom_.dim()) {
    throw DomainError("estimator: lattice and phantom dimensions differ");
  }
  check_coverage(phantom_, reach_, window);
  EstimateResult out{0.0, 0.0, alpha_, 0, placement};
  double sum = 0.0;
  if (radial_) {
    const RadialWeight& g = *radial_;
    if (!g.empty()) {
      for_each_in_shell(recentred(placement, phantom_.center()), g.inner(), g.outer(),
                        [&](double r) {
                          const double v = g(r);
                          if (v != 0.0) {
                            sum += v;
                            ++out.support_points;
                          }
                        });
    }
  } else {
    for_each_point(placement, window, [&](const Point& z) {
      const double v = f_(profile_->theta(z.dot(phantom_.normal()) / a_));
      if (v != 0.0) {
        sum += v;
        ++out.support_points;
      }
    });
  }
  const double b = placement.resolution;
  out.raw = sum * std::pow(b, phantom_.dim()) / a_;
  out.estimate = placement.lattice.cell_volume() * out.raw / alpha_;
  return out;
}

EstimateResult SurfaceEstimator::estimate(const Placement& placement) const {
  return estimate(placement, default_window(phantom_, reach_, placement));
}

EstimateResult estimate_surface(const Phantom& phantom, const HalfspaceProfile& profile,
                                const WeightFunction& f, double a, const Placement& placement,
                                const Box& window) {
  return SurfaceEstimator(phantom, profile, f, a).estimate(placement, window);
}

VolumeEstimator::VolumeEstimator(Phantom phantom, const Psf& psf, double a, int table_nodes)
    : phantom_(std::move(phantom)), a_(a) {
  if (!phantom_.is_ball()) throw DomainError("volume estimator: phantom must be a ball");
  if (!(a > 0.0)) throw DomainError("volume estimator: scale a must be positive");
  if (table_nodes < 4) throw DomainError("volume estimator: need at least 4 nodes");
  reach_ = a * psf.effective_radius(1e-12);
  const double R = phantom_.radius();
  lo_ = std::max(0.0, R - reach_);
  step_ = (R + reach_ - lo_) / (table_nodes - 1);
  table_.resize(static_cast<std::size_t>(table_nodes));
  for (int i = 0; i < table_nodes; ++i) {
    table_[static_cast<std::size_t>(i)] = ball_intensity(psf, R, a, lo_ + i * step_);
  }
}

double VolumeEstimator::theta(double r) const {
  const auto n = static_cast<long>(table_.size());
  const double u = std::clamp((r - lo_) / step_, 0.0, static_cast<double>(n - 1));
  const long i = std::clamp(static_cast<long>(u) - 1, 0L, n - 4);
  const double x = u - static_cast<double>(i);
  const double* y = table_.data() + i;
  const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double l1 = x * (x - 2) * (x - 3) / 2.0;
  const double l2 = -x * (x - 1) * (x - 3) / 2.0;
  const double l3 = x * (x - 1) * (x - 2) / 6.0;
  return l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3];
}

double VolumeEstimator::estimate(const Placement& placement, const Box& window) const {
  check_coverage(phantom_, reach_, window);
  const Placement local = recentred(placement, phantom_.center());
  double sum = 0.0;
  const double hi = phantom_.radius() + reach_;
  if (lo_ > 0.0) {
    // theta = 1 up to the 1e-12 tail inside R - reach
    sum += static_cast<double>(count_in_ball(local, lo_));
    for_each_in_shell(local, lo_, hi, [&](double r) {
      if (r > lo_) sum += theta(r);
    });
  } else {
    for_each_in_shell(local, 0.0, hi, [&](double r) { sum += theta(r); });
  }
  return std::pow(placement.resolution, phantom_.dim()) * placement.lattice.cell_volume() * sum;
}

double VolumeEstimator::estimate(const Placement& placement) const {
  return estimate(placement, default_window(phantom_, reach_, placement));
}

double estimate_volume_grey(const Phantom& phantom, const Psf& psf, double a,
                            const Placement& placement, const Box& window) {
  return VolumeEstimator(phantom, psf, a).estimate(placement, window);
}

double estimate_volume_binary(const Phantom& phantom, const Placement& placement,
                              const Box& window) {
  if (!phantom.is_ball()) throw DomainError("volume estimator: phantom must be a ball");
  check_coverage(phantom, 0.0, window);
  const auto n = count_in_ball(recentred(placement, phantom.center()), phantom.radius());
  return std::pow(placement.resolution, phantom.dim()) * placement.lattice.cell_volume() *
         static_cast<double>(n);
}

double estimate_volume_binary(const Phantom& phantom, const Placement& placement) {
  return estimate_volume_binary(phantom, placement, default_window(phantom, 0.0, placement));
}

}  // namespace greyvar
