#include "greyvar/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greyvar/bessel.hpp"
#include "greyvar/errors.hpp"
#include "greyvar/quadrature.hpp"

namespace greyvar {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double default_max_cutoff(int dim) { return dim == 2 ? 2048.0 : 512.0; }

}  // namespace

double tail_sum_bound(const Lattice& lattice, double cutoff, double exponent) {
  const int d = lattice.dim();
  if (!(exponent > d)) throw DomainError("tail bound: exponent must exceed the dimension");
  const double delta = lattice.dual_covering_bound();
  const double u0 = cutoff - 2.0 * delta;
  if (!(u0 > 0.0)) return std::numeric_limits<double>::infinity();
  // int_{u0}^inf (u + delta)^{d-1} u^{-p} du, expanded binomially
  double integral = 0.0;
  for (int k = 0; k <= d - 1; ++k) {
    const double e = exponent - (d - 1 - k) - 1.0;  // u^{d-1-k-p} integrates to u0^{-e} / e
    integral += binomial(d - 1, k) * std::pow(delta, k) * std::pow(u0, -e) / e;
  }
  return lattice.cell_volume() * sphere_area(d) * integral;
}

double tail_sum_estimate(const Lattice& lattice, double cutoff, double exponent) {
  const int d = lattice.dim();
  if (!(exponent > d)) throw DomainError("tail estimate: exponent must exceed the dimension");
  return lattice.cell_volume() * sphere_area(d) * std::pow(cutoff, d - exponent) / (exponent - d);
}

TailModel empirical_tail(double exponent, double cutoff, const std::vector<Shell>& shells,
                         const std::vector<double>& values) {
  TailModel model{exponent, 0.0, 0.0};
  for (std::size_t i = 0; i < shells.size(); ++i) {
    if (shells[i].norm >= 0.5 * cutoff) {
      model.bound = std::max(model.bound, std::abs(values[i]) * std::pow(shells[i].norm, exponent));
    }
  }
  return model;
}

LatticeSum lattice_sum(
    const Lattice& lattice, const std::function<double(double)>& weight,
    const std::function<TailModel(double, const std::vector<Shell>&, const std::vector<double>&)>&
        tail,
    const TruncationPolicy& policy) {
  const double max_cutoff =
      policy.max_cutoff > 0.0 ? policy.max_cutoff : default_max_cutoff(lattice.dim());
  double cutoff = std::min(policy.initial_cutoff, max_cutoff);
  std::vector<Shell> seen;
  std::vector<double> values;
  LatticeSum out;
  double reached = 0.0;
  while (true) {
    for (const Shell& s : dual_shells(lattice, cutoff)) {
      if (s.norm <= reached) continue;
      const double v = weight(s.norm);
      out.partial += static_cast<double>(s.multiplicity) * v;
      out.points += s.multiplicity;
      seen.push_back(s);
      values.push_back(v);
    }
    reached = cutoff;
    out.cutoff = cutoff;
    out.shells = seen.size();
    const TailModel model = tail(cutoff, seen, values);
    out.tail_bound = model.bound > 0.0 ? model.bound * tail_sum_bound(lattice, cutoff, model.exponent)
                                       : 0.0;
    out.tail_estimate =
        model.mean > 0.0 ? model.mean * tail_sum_estimate(lattice, cutoff, model.exponent) : 0.0;
    bool quiet = seen.size() >= 3;
    for (std::size_t k = 1; quiet && k <= 3; ++k) {
      const std::size_t i = seen.size() - k;
      quiet = static_cast<double>(seen[i].multiplicity) * std::abs(values[i]) <=
              policy.shell_rel * std::abs(out.partial);
    }
    const bool small_tail = out.tail_bound <= policy.rel_tail * std::abs(out.partial);
    if (small_tail && quiet) return out;
    if (cutoff >= max_cutoff) {
      const double ratio = out.tail_bound / (policy.rel_tail * std::abs(out.partial));
      throw TruncationError("lattice sum tail bound exceeds tolerance at cutoff " +
                                std::to_string(cutoff),
                            cutoff * std::max(2.0, ratio));
    }
    cutoff = std::min(2.0 * cutoff, max_cutoff);
  }
}

namespace {

// sup_{x >= x0} sqrt(x) |J_nu(x)|, sampled beyond x0 and capped by the asymptotic envelope
double bessel_envelope(double order, double x0) {
  double best = std::sqrt(2.0 / kPi) * (1.0 + 1.0 / x0);
  for (double x = x0; x <= x0 + 60.0; x += 0.005) {
    best = std::max(best, std::sqrt(x) * std::abs(bessel_j(order, x)));
  }
  return best * (1.0 + 1e-3);
}

// Tail model of |F(g_a)(r / b)|^2 for an annulus indicator with radii r1 < r2.
TailModel annulus_tail(const RadialWeight& g, double b, double cutoff) {
  const int d = g.dim();
  const double amp2 = g.weight().amplitude() * g.weight().amplitude();
  const double r1 = g.inner();
  const double r2 = g.outer();
  const double rmin = r1 > 0.0 ? r1 : r2;
  const double cj = bessel_envelope(d / 2.0, 2.0 * kPi * rmin * cutoff / b);
  const double bd1 = std::pow(b, d + 1);
  const double root_sum = std::pow(r1, (d - 1) / 2.0) + std::pow(r2, (d - 1) / 2.0);
  TailModel model;
  model.exponent = d + 1.0;
  model.bound = amp2 * cj * cj / (2.0 * kPi) * root_sum * root_sum * bd1;
  model.mean = amp2 * (std::pow(r1, d - 1) + std::pow(r2, d - 1)) * bd1 / (2.0 * kPi * kPi);
  return model;
}

}  // namespace

ExactVariance variance_exact_ball(const RadialWeight& g, double alpha, double b,
                                  const Lattice& lattice, const TruncationPolicy& policy) {
  if (!(b > 0.0)) throw DomainError("variance: resolution b must be positive");
  if (lattice.dim() != g.dim()) throw DomainError("variance: lattice dimension mismatch");
  if (std::abs(alpha) < 1e-12) throw NormalizationError("alpha_f vanishes");
  ExactVariance out;
  out.prefactor = 1.0 / (g.scale() * alpha * g.scale() * alpha);
  if (g.empty()) return out;
  auto weight = [&](double xi) {
    const double v = ball_fourier_exact(g, xi / b);
    return v * v;
  };
  const bool closed = g.weight().piecewise_constant();
  auto tail = [&](double cutoff, const std::vector<Shell>& shells,
                  const std::vector<double>& values) {
    return closed ? annulus_tail(g, b, cutoff)
                  : empirical_tail(g.dim() + 1.0, cutoff, shells, values);
  };
  out.sum = lattice_sum(lattice, weight, tail, policy);
  out.variance = out.prefactor * out.sum.value();
  return out;
}

ExactVariance variance_exact_ball(const Phantom& phantom, const HalfspaceProfile& profile,
                                  const WeightFunction& f, double a, double b,
                                  const Lattice& lattice, const TruncationPolicy& policy) {
  if (!phantom.is_ball()) throw DomainError("variance_exact_ball: phantom must be a ball");
  const RadialWeight g(profile.psf(), phantom.radius(), a, f, 1025);
  return variance_exact_ball(g, alpha_f(f, profile), b, lattice, policy);
}

double lens_measure(int dim, double p, double q, double s) {
  if (p <= 0.0 || q <= 0.0) return 0.0;
  if (s >= p + q) return 0.0;
  const double small = std::min(p, q);
  if (s <= std::abs(p - q)) return ball_volume(dim) * std::pow(small, dim);
  if (dim == 2) {
    const double cp = std::clamp((s * s + p * p - q * q) / (2.0 * s * p), -1.0, 1.0);
    const double cq = std::clamp((s * s + q * q - p * p) / (2.0 * s * q), -1.0, 1.0);
    const double k = (-s + p + q) * (s + p - q) * (s - p + q) * (s + p + q);
    return p * p * std::acos(cp) + q * q * std::acos(cq) - 0.5 * std::sqrt(std::max(0.0, k));
  }
  const double t = p + q - s;
  return kPi * t * t * (s * s + 2.0 * s * (p + q) - 3.0 * (p - q) * (p - q)) / (12.0 * s);
}

double annulus_autocorrelation(const RadialWeight& g, double s) {
  if (!g.weight().piecewise_constant()) {
    throw DomainError("annulus autocorrelation needs a piecewise-constant weight");
  }
  const int d = g.dim();
  const double r1 = g.inner();
  const double r2 = g.outer();
  const double amp = g.weight().amplitude();
  return amp * amp *
         (lens_measure(d, r2, r2, s) - 2.0 * lens_measure(d, r1, r2, s) +
          lens_measure(d, r1, r1, s));
}

double variance_spatial_ball(const RadialWeight& g, double alpha, double b,
                             const Lattice& lattice) {
  if (!(b > 0.0)) throw DomainError("variance: resolution b must be positive");
  const int d = g.dim();
  const Placement grid = make_placement(lattice, b);
  double sum = 0.0;
  for_each_in_shell(grid, 0.0, 2.0 * g.outer(), [&](double s) { sum += annulus_autocorrelation(g, s); });
  const double scale = 1.0 / (g.scale() * alpha);
  const double second = lattice.cell_volume() * std::pow(b, d) * scale * scale * sum;
  const double mean = scale * g.integral();
  return second - mean * mean;
}

LatticeSum profile_lattice_sum(const WeightFunction& f, const HalfspaceProfile& profile,
                               const Lattice& lattice, const TruncationPolicy& policy) {
  const int d = lattice.dim();
  if (profile.psf().dim() != d) throw DomainError("lattice and psf dimensions differ");
  auto weight = [&](double xi) {
    return fourier_profile_abs2(f, profile, xi) * std::pow(xi, 1 - d);
  };
  const double amp2 = f.amplitude() * f.amplitude();
  auto tail = [&](double cutoff, const std::vector<Shell>& shells,
                  const std::vector<double>& values) {
    if (f.piecewise_constant()) {
      // |F(r)| <= amp / (pi r), mean square amp^2 / (2 pi^2 r^2)
      return TailModel{d + 1.0, amp2 / (kPi * kPi), amp2 / (2.0 * kPi * kPi)};
    }
    return empirical_tail(d + 1.0, cutoff, shells, values);
  };
  return lattice_sum(lattice, weight, tail, policy);
}

AsymptoticVariance variance_asymptotic_isotropic(const Phantom& phantom,
                                                 const HalfspaceProfile& profile,
                                                 const WeightFunction& f, double a,
                                                 const Lattice& lattice,
                                                 const TruncationPolicy& policy) {
  if (!phantom.is_ball()) throw DomainError("isotropic asymptotics need a ball phantom");
  if (!(a > 0.0)) throw DomainError("variance: scale a must be positive");
  const int d = phantom.dim();
  const double alpha = alpha_f(f, profile);
  AsymptoticVariance out;
  out.sum = profile_lattice_sum(f, profile, lattice, policy);
  out.constant = 2.0 / sphere_area(d) / (alpha * alpha) * phantom.surface_area() * out.sum.value();
  out.main = std::pow(a, d - 1) * out.constant;
  out.osc_bound = out.main;
  return out;
}

RadiusDensity::RadiusDensity(double s0, double s1) : s0_(s0), s1_(s1) {
  if (!(s0 > 0.0 && s1 > s0)) {
    throw DomainError("radius density must be supported in (0, inf) away from 0");
  }
  // int_{-1}^{1} (1 - u^2)^4 du = 256 / 315, ds = (s1 - s0) / 2 du
  norm_ = 1.0 / (0.5 * (s1 - s0) * 256.0 / 315.0);
}

double RadiusDensity::density(double s) const {
  if (s <= s0_ || s >= s1_) return 0.0;
  const double u = (2.0 * s - s0_ - s1_) / (s1_ - s0_);
  const double v = 1.0 - u * u;
  return norm_ * v * v * v * v;
}

double RadiusDensity::moment(double p) const {
  return quad::integrate([&](double s) { return std::pow(s, p) * density(s); }, s0_, s1_, 1e-14);
}

double RadiusDensity::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    const double u = 2.0 * unit(rng) - 1.0;
    const double v = 1.0 - u * u;
    if (unit(rng) <= v * v * v * v) return 0.5 * (s0_ + s1_) + 0.5 * (s1_ - s0_) * u;
  }
}

RandomRadiusVariance variance_asymptotic_random_radius(const Phantom& phantom,
                                                       const RadiusDensity& h,
                                                       const HalfspaceProfile& profile,
                                                       const WeightFunction& f, double a,
                                                       const Lattice& lattice,
                                                       const TruncationPolicy& policy) {
  if (!phantom.is_ball()) throw DomainError("random-radius asymptotics need a ball phantom");
  if (!(a > 0.0)) throw DomainError("variance: scale a must be positive");
  const int d = phantom.dim();
  const double alpha = alpha_f(f, profile);
  RandomRadiusVariance out;
  out.mean_surface = phantom.surface_area() * h.moment(d - 1.0);
  out.sum = profile_lattice_sum(f, profile, lattice, policy);
  out.constant = 2.0 / sphere_area(d) / (alpha * alpha) * out.mean_surface * out.sum.value();
  out.variance = std::pow(a, d - 1) * out.constant;
  return out;
}

namespace {

Placement stratified_placement(const Lattice& lattice, double b, std::int64_t index,
                               std::int64_t per_axis, Rng& rng) {
  const int d = lattice.dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t cell = index;
  Point u(d);
  for (int j = 0; j < d; ++j) {
    const auto k = static_cast<double>(cell % per_axis);
    cell /= per_axis;
    u[j] = (k + unit(rng)) / static_cast<double>(per_axis);
  }
  const Matrix q = random_rotation(d, rng);
  return make_placement(lattice, b, lattice.basis() * u, q);
}

}  // namespace

EmpiricalVariance variance_empirical(const SurfaceEstimator& estimator, double b,
                                     const Lattice& lattice, std::int64_t n, std::uint64_t seed,
                                     int workers, Sampling sampling) {
  if (n < 100) throw DomainError("variance_empirical: need at least 100 replicates");
  if (!(b > 0.0)) throw DomainError("variance: resolution b must be positive");
  const int d = lattice.dim();
  const auto per_axis = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / d) + 1e-9)));
  const auto values = run_replicates(n, seed, workers, [&](std::int64_t i, Rng& rng) {
    const Placement p = sampling == Sampling::Stratified
                            ? stratified_placement(lattice, b, i, per_axis, rng)
                            : random_placement(lattice, b, rng);
    return estimator.estimate(p).estimate;
  });
  return {summarize(values), seed};
}

EmpiricalVariance variance_empirical_random_radius(const Phantom& phantom, const RadiusDensity& h,
                                                   const HalfspaceProfile& profile,
                                                   const WeightFunction& f, double a, double b,
                                                   const Lattice& lattice, std::int64_t n,
                                                   std::uint64_t seed, int workers) {
  if (!phantom.is_ball()) throw DomainError("random-radius variance needs a ball phantom");
  if (n < 100) throw DomainError("variance_empirical: need at least 100 replicates");
  const int d = phantom.dim();
  const double alpha = alpha_f(f, profile);
  const double scale = lattice.cell_volume() * std::pow(b, d) / (a * alpha);
  const double r_min = h.lower() * phantom.radius();
  const double r_max = h.upper() * phantom.radius();
  // offsets around the half-space transition zone with half a PSF unit to spare
  const double t_lo = a * (profile.phi(f.omega()) - 0.5);
  const double t_hi = a * (profile.phi(f.beta()) + 0.5);
  const BallIntensityFamily family(profile.psf(), r_min, r_max, a, t_lo, t_hi);
  for (double radius : {r_min, 0.5 * (r_min + r_max), r_max}) {
    if (!(family.theta(radius, radius + t_lo) > f.omega() &&
          family.theta(radius, radius + t_hi) < f.beta())) {
      throw BracketError("random-radius variance: transition zone exceeds the offset table");
    }
  }
  const double area = sphere_area(d);
  const auto values = run_replicates(n, seed, workers, [&](std::int64_t, Rng& rng) {
    const double radius = h.sample(rng) * phantom.radius();
    const Placement p = random_placement(lattice, b, rng);
    auto g = [&](double r) { return f(family.theta(radius, r)); };
    double sum = 0.0;
    for_each_in_shell(p, radius + t_lo, radius + t_hi, [&](double r) { sum += g(r); });
    // E[S | s] = (a alpha_f)^{-1} int g
    double integral = 0.0;
    constexpr int kPanels = 128;
    for (int k = 0; k < kPanels; ++k) {
      const double lo = radius + t_lo + (t_hi - t_lo) * k / kPanels;
      const double hi = radius + t_lo + (t_hi - t_lo) * (k + 1) / kPanels;
      integral += quad::panel([&](double r) { return g(r) * std::pow(r, d - 1); }, lo, hi,
                              quad::gl15());
    }
    return scale * sum - area * integral / (a * alpha);
  });
  return {summarize(values), seed};
}

VolumeVariance variance_empirical_volume(const Phantom& phantom, const Psf& psf, double a,
                                         double b, const Lattice& lattice, std::int64_t n,
                                         std::uint64_t seed, int workers) {
  if (n < 100) throw DomainError("variance_empirical: need at least 100 replicates");
  const VolumeEstimator grey(phantom, psf, a, 2049);
  std::vector<double> binary(static_cast<std::size_t>(n));
  const auto values = run_replicates(n, seed, workers, [&](std::int64_t i, Rng& rng) {
    const Placement p = random_placement(lattice, b, rng);
    binary[static_cast<std::size_t>(i)] = estimate_volume_binary(phantom, p);
    return grey.estimate(p);
  });
  return {summarize(values), summarize(binary)};
}

BoundReport variance_bound_check(const Phantom& phantom, const HalfspaceProfile& profile,
                                 const WeightFunction& f, double a, double b,
                                 const Lattice& lattice, const TruncationPolicy& policy) {
  if (!phantom.is_ball()) throw DomainError("bound check needs a ball phantom");
  const int d = phantom.dim();
  const double alpha = alpha_f(f, profile);
  BoundReport out;
  out.alpha_abs = alpha_abs_f(f, profile);
  out.boundary_terms = std::abs(f(f.beta())) + std::abs(f(f.omega()));
  out.derivative_integral = profile_variation(f, profile);
  out.structural = std::pow(b, d) / a * std::pow(phantom.radius(), d - 1) * out.alpha_abs /
                   (alpha * alpha) * (out.boundary_terms + out.derivative_integral);
  out.variance = variance_exact_ball(phantom, profile, f, a, b, lattice, policy).variance;
  out.implied_constant = out.variance / out.structural;
  return out;
}

}  // namespace greyvar
