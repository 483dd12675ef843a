#include "greyvar/radial_weight.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>

#include "greyvar/errors.hpp"
#include "greyvar/phantom.hpp"
#include "greyvar/quadrature.hpp"

namespace greyvar {

double ball_level_radius(const Psf& psf, double radius, double a, double level) {
  const double reach = a * psf.support_radius();
  const double lo = std::max(0.0, radius - reach);
  const double hi = radius + reach;
  auto gap = [&](double r) { return ball_intensity(psf, radius, a, r) - level; };
  const double g_lo = gap(lo);
  if (lo == 0.0 && g_lo <= 0.0) return 0.0;
  const double g_hi = gap(hi);
  if (!(g_lo > 0.0 && g_hi < 0.0)) {
    throw BracketError("ball_level_radius: grey level not crossed inside the blur zone");
  }
  std::uintmax_t iters = 200;
  const auto [left, right] = boost::math::tools::toms748_solve(
      gap, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(48), iters);
  return 0.5 * (left + right);
}

RadialWeight::RadialWeight(const Psf& psf, double radius, double a, const WeightFunction& f,
                           int nodes)
    : dim_(psf.dim()), radius_(radius), a_(a), f_(f) {
  if (!(radius > 0.0)) throw DomainError("radial weight: radius must be positive");
  if (!(a > 0.0)) throw DomainError("radial weight: scale a must be positive");
  if (nodes < 4) throw DomainError("radial weight: need at least 4 nodes");
  inner_ = ball_level_radius(psf, radius, a, f.omega());
  outer_ = ball_level_radius(psf, radius, a, f.beta());
  if (empty()) return;

  table_.resize(static_cast<std::size_t>(nodes));
  step_ = (outer_ - inner_) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) {
    table_[static_cast<std::size_t>(i)] = ball_intensity(psf, radius, a, inner_ + i * step_);
  }

  const auto& rule = quad::gl15();
  const double area = sphere_area(dim_);
  double sum = 0.0;
  for (int i = 0; i + 1 < nodes; ++i) {
    sum += quad::panel([&](double r) { return (*this)(r) * std::pow(r, dim_ - 1); },
                       inner_ + i * step_, inner_ + (i + 1) * step_, rule);
  }
  integral_ = area * sum;
}

double RadialWeight::theta(double r) const {
  if (table_.empty()) return 0.0;
  const auto n = static_cast<long>(table_.size());
  const double u = std::clamp((r - inner_) / step_, 0.0, static_cast<double>(n - 1));
  const long i = std::clamp(static_cast<long>(u) - 1, 0L, n - 4);
  const double x = u - static_cast<double>(i);  // position relative to node i, in [0, 3]
  const double* y = table_.data() + i;
  // cubic Lagrange through nodes 0..3
  const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double l1 = x * (x - 2) * (x - 3) / 2.0;
  const double l2 = -x * (x - 1) * (x - 3) / 2.0;
  const double l3 = x * (x - 1) * (x - 2) / 6.0;
  return l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3];
}

double RadialWeight::operator()(double r) const {
  if (!(r >= inner_ && r <= outer_) || empty()) return 0.0;
  if (f_.piecewise_constant()) return f_.amplitude();
  return f_(std::clamp(theta(r), f_.beta(), f_.omega()));
}

}  // namespace greyvar

namespace greyvar {

namespace {

// Cubic Lagrange stencil on a uniform grid: first node index and four weights.
struct Stencil {
  long first;
  double w[4];
};

Stencil stencil(double u, long n) {
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  Stencil s{};
  s.first = std::clamp(static_cast<long>(u) - 1, 0L, n - 4);
  const double x = u - static_cast<double>(s.first);
  s.w[0] = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  s.w[1] = x * (x - 2) * (x - 3) / 2.0;
  s.w[2] = -x * (x - 1) * (x - 3) / 2.0;
  s.w[3] = x * (x - 1) * (x - 2) / 6.0;
  return s;
}

}  // namespace

BallIntensityFamily::BallIntensityFamily(const Psf& psf, double r_min, double r_max, double a,
                                         double t_lo, double t_hi, int radius_nodes,
                                         int offset_nodes)
    : dim_(psf.dim()),
      r_min_(r_min),
      r_nodes_(radius_nodes),
      t_lo_(t_lo),
      t_hi_(t_hi),
      t_nodes_(offset_nodes) {
  if (!(r_min > 0.0 && r_max > r_min)) throw DomainError("intensity family: bad radius range");
  if (!(t_hi > t_lo)) throw DomainError("intensity family: bad offset range");
  if (radius_nodes < 4 || offset_nodes < 4) {
    throw DomainError("intensity family: need at least 4 nodes per axis");
  }
  r_step_ = (r_max - r_min) / (radius_nodes - 1);
  t_step_ = (t_hi - t_lo) / (offset_nodes - 1);
  table_.resize(static_cast<std::size_t>(radius_nodes) * static_cast<std::size_t>(offset_nodes));
  for (int i = 0; i < radius_nodes; ++i) {
    const double radius = r_min + i * r_step_;
    for (int j = 0; j < offset_nodes; ++j) {
      table_[static_cast<std::size_t>(i) * static_cast<std::size_t>(offset_nodes) +
             static_cast<std::size_t>(j)] =
          ball_intensity(psf, radius, a, std::max(0.0, radius + t_lo + j * t_step_));
    }
  }
}

double BallIntensityFamily::theta(double radius, double r) const {
  const Stencil sr = stencil((radius - r_min_) / r_step_, r_nodes_);
  const Stencil st = stencil((r - radius - t_lo_) / t_step_, t_nodes_);
  double out = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double* row = table_.data() + (sr.first + i) * t_nodes_ + st.first;
    out += sr.w[i] * (st.w[0] * row[0] + st.w[1] * row[1] + st.w[2] * row[2] + st.w[3] * row[3]);
  }
  return out;
}

}  // namespace greyvar
