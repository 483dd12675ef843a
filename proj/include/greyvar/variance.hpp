/**
 * @file variance.hpp
 * @brief Exact, spatial, asymptotic and empirical variance of the surface estimator.
 *
 * Under a uniform lattice translation the estimator is
 *   S = (a alpha_f)^{-1} sum_{xi in L*} F(g_a)(Q xi / b) e^{2 pi i <xi, c>},
 * so Var(S) = (a alpha_f)^{-2} sum_{xi != 0} |F(g_a)(|xi| / b)|^2 for radial g_a.
 * Slowly decaying lattice sums are truncated at a cutoff Xi and carry a rigorous
 * tail bound plus (for piecewise-constant f) a mean-square tail estimate.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "greyvar/estimator.hpp"
#include "greyvar/spectral.hpp"
#include "greyvar/stats.hpp"

namespace greyvar {

struct LatticeSum {
  double partial = 0.0;        // sum over 0 < |xi| <= cutoff
  double tail_estimate = 0.0;  // expected contribution of |xi| > cutoff (0 if unknown)
  double tail_bound = 0.0;     // upper bound on that contribution
  double cutoff = 0.0;
  std::int64_t points = 0;
  std::size_t shells = 0;
  double value() const noexcept { return partial + tail_estimate; }
};

/// Beyond the cutoff the per-point weight satisfies w(r) <= bound r^{-exponent} and,
/// on average over shells, w(r) ~ mean r^{-exponent} (mean = 0: no estimate).
struct TailModel {
  double exponent = 0.0;
  double bound = 0.0;
  double mean = 0.0;
};

struct TruncationPolicy {
  double initial_cutoff = 16.0;
  double max_cutoff = 0.0;   // 0: 2048 for d = 2, 512 for d = 3
  double rel_tail = 0.01;    // tail bound must fall below this fraction of the partial sum
  double shell_rel = 1e-6;   // and the last three shells below this fraction
};

/// Sum of w(|xi|) over xi in L* \ {0}, doubling the cutoff until the policy holds.
/// `tail(cutoff, shells, values)` supplies the envelope for |xi| > cutoff.
/// Throws TruncationError with a suggested cutoff when max_cutoff is reached.
LatticeSum lattice_sum(
    const Lattice& lattice, const std::function<double(double)>& weight,
    const std::function<TailModel(double, const std::vector<Shell>&, const std::vector<double>&)>&
        tail,
    const TruncationPolicy& policy = {});

/// sum_{|xi| > cutoff} |xi|^{-p} <= c_L omega_d int_{u0}^inf (u + delta)^{d-1} u^{-p} du with
/// u0 = cutoff - 2 delta and delta a dual covering radius bound.
double tail_sum_bound(const Lattice& lattice, double cutoff, double exponent);
/// Continuum estimate c_L omega_d cutoff^{d-p} / (p - d).
double tail_sum_estimate(const Lattice& lattice, double cutoff, double exponent);

/// Envelope from the largest w(r) r^p over shells in [cutoff / 2, cutoff].
TailModel empirical_tail(double exponent, double cutoff, const std::vector<Shell>& shells,
                         const std::vector<double>& values);

struct ExactVariance {
  double variance = 0.0;
  double prefactor = 0.0;  // (a alpha_f)^{-2}
  LatticeSum sum;
};

/// (a alpha_f)^{-2} sum_{xi != 0} |F(g_a)(|xi| / b)|^2.
ExactVariance variance_exact_ball(const RadialWeight& g, double alpha, double b,
                                  const Lattice& lattice, const TruncationPolicy& policy = {});
ExactVariance variance_exact_ball(const Phantom& phantom, const HalfspaceProfile& profile,
                                  const WeightFunction& f, double a, double b,
                                  const Lattice& lattice, const TruncationPolicy& policy = {});

/// Area (d = 2) or volume (d = 3) of B(p) ∩ B(q; s e_1).
double lens_measure(int dim, double p, double q, double s);
/// Autocorrelation int g(x) g(x + w) dx of the annulus indicator, |w| = s.
double annulus_autocorrelation(const RadialWeight& g, double s);

/// Spatial-domain variance for piecewise-constant f:
///   c_L b^d (a alpha_f)^{-2} sum_{w in bL} C(|w|) - ((a alpha_f)^{-1} int g_a)^2.
double variance_spatial_ball(const RadialWeight& g, double alpha, double b,
                             const Lattice& lattice);

/// sum_{xi != 0} |F(f o theta^H)(|xi|)|^2 |xi|^{1-d}.
LatticeSum profile_lattice_sum(const WeightFunction& f, const HalfspaceProfile& profile,
                               const Lattice& lattice, const TruncationPolicy& policy = {});

struct AsymptoticVariance {
  double main = 0.0;       // 2 a^{d-1} omega_d^{-1} alpha_f^{-2} S(X) sum
  double osc_bound = 0.0;  // |Z| <= 1: variance within main (1 +- 1)
  double constant = 0.0;   // main / a^{d-1}
  LatticeSum sum;
};

AsymptoticVariance variance_asymptotic_isotropic(const Phantom& phantom,
                                                 const HalfspaceProfile& profile,
                                                 const WeightFunction& f, double a,
                                                 const Lattice& lattice,
                                                 const TruncationPolicy& policy = {});

/// Density proportional to (1 - u^2)^4, u = (2 s - s0 - s1) / (s1 - s0), on [s0, s1].
class RadiusDensity {
 public:
  RadiusDensity(double s0, double s1);

  double lower() const noexcept { return s0_; }
  double upper() const noexcept { return s1_; }
  double density(double s) const;
  /// E s^p by quadrature.
  double moment(double p) const;
  /// Rejection sampling from the uniform proposal.
  double sample(Rng& rng) const;

 private:
  double s0_;
  double s1_;
  double norm_;
};

struct RandomRadiusVariance {
  double constant = 0.0;  // lim a^{1-d} Var
  double variance = 0.0;  // a^{d-1} constant
  double mean_surface = 0.0;
  LatticeSum sum;
};

/// 2 omega_d^{-1} alpha_f^{-2} E S(sQX) sum_{xi != 0} |F(f o theta^H)(|xi|)|^2 |xi|^{1-d}.
RandomRadiusVariance variance_asymptotic_random_radius(const Phantom& phantom,
                                                       const RadiusDensity& h,
                                                       const HalfspaceProfile& profile,
                                                       const WeightFunction& f, double a,
                                                       const Lattice& lattice,
                                                       const TruncationPolicy& policy = {});

enum class Sampling { Iid, Stratified };

struct EmpiricalVariance {
  SampleSummary summary;
  std::uint64_t seed = 0;
};

/// Sample variance of S over random placements (uniform c, Haar Q). Stratified sampling
/// draws c jittered inside an n^{1/d}-grid of sub-cells; each draw is still uniform.
/// Requires n >= 100.
EmpiricalVariance variance_empirical(const SurfaceEstimator& estimator, double b,
                                     const Lattice& lattice, std::int64_t n, std::uint64_t seed,
                                     int workers = 1, Sampling sampling = Sampling::Iid);

/// Random radius s ~ h: variance of S - E[S | s], i.e. E_s Var(S | s).
EmpiricalVariance variance_empirical_random_radius(const Phantom& phantom, const RadiusDensity& h,
                                                   const HalfspaceProfile& profile,
                                                   const WeightFunction& f, double a, double b,
                                                   const Lattice& lattice, std::int64_t n,
                                                   std::uint64_t seed, int workers = 1);

struct VolumeVariance {
  SampleSummary grey;
  SampleSummary binary;
};

/// Grey and binary volume estimates of a ball evaluated on the same placements.
VolumeVariance variance_empirical_volume(const Phantom& phantom, const Psf& psf, double a,
                                         double b, const Lattice& lattice, std::int64_t n,
                                         std::uint64_t seed, int workers = 1);

struct BoundReport {
  double structural = 0.0;  // a^{-1} b^d R^{d-1} (alpha_|f| / alpha_f^2) (|f(beta)| + |f(omega)| + V)
  double boundary_terms = 0.0;
  double derivative_integral = 0.0;  // V = int |(f o theta^H)'|
  double alpha_abs = 0.0;
  double variance = 0.0;
  double implied_constant = 0.0;  // variance / structural
};

BoundReport variance_bound_check(const Phantom& phantom, const HalfspaceProfile& profile,
                                 const WeightFunction& f, double a, double b,
                                 const Lattice& lattice, const TruncationPolicy& policy = {});

}  // namespace greyvar
