// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.
// Usage: acceptance [criterion ...]   (no arguments: run all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "greyvar/bessel.hpp"
#include "greyvar/errors.hpp"
#include "greyvar/spectral.hpp"
#include "greyvar/variance.hpp"

using namespace greyvar;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

WeightFunction indicator() { return WeightFunction::indicator(0.3, 0.7); }
WeightFunction plateau() { return WeightFunction::smooth_plateau(0.2, 0.3, 0.7, 0.8); }

// 1. |MC mean - 2 pi| decreases over a = b in {0.1, 0.05, 0.025}; <= 2% at the finest scale.
Outcome mean_convergence() {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const Phantom ball = Phantom::ball(2, 1.0);
  std::vector<double> err;
  std::string detail = "|mean-2pi|:";
  for (double a : {0.1, 0.05, 0.025}) {
    const SurfaceEstimator est(ball, profile, indicator(), a);
    const auto s = variance_empirical(est, a, Lattice::cubic(2), 2000, 101, 1, Sampling::Stratified);
    err.push_back(std::abs(s.summary.mean - 2 * kPi));
    detail += fmt(" a=%g %.5f (se %.4f)", a, err.back(), s.summary.se_mean);
  }
  const bool pass = err[0] > err[1] && err[1] > err[2] && err[2] <= 0.02 * 2 * kPi;
  return {pass, detail};
}

// 2. Spatial-domain and Fourier lattice-sum variance agree to 1e-3 relative.
Outcome poisson_duality() {
  const Psf psf = Psf::gaussian(2);
  const HalfspaceProfile profile(psf);
  const double a = 0.05;
  const RadialWeight g(psf, 1.0, a, indicator(), 1025);
  const double alpha = alpha_f(indicator(), profile);
  const double fourier = variance_exact_ball(g, alpha, a, Lattice::cubic(2)).variance;
  const double spatial = variance_spatial_ball(g, alpha, a, Lattice::cubic(2));
  const double rel = std::abs(spatial - fourier) / fourier;
  return {rel <= 1e-3, fmt("fourier %.8g spatial %.8g rel %.2e", fourier, spatial, rel)};
}

// 3. Exact variance within 3 MC standard errors of the empirical one, 10^4 replicates.
Outcome exact_vs_empirical() {
  bool pass = true;
  std::string detail;
  for (int d : {2, 3})
    for (bool bump : {false, true}) {
      const Psf psf = bump ? Psf::compact_bump(d) : Psf::gaussian(d);
      const HalfspaceProfile profile(psf);
      const double a = d == 2 ? 0.05 : 0.1;
      const Phantom ball = Phantom::ball(d, 1.0);
      const double exact = variance_exact_ball(ball, profile, indicator(), a, a, Lattice::cubic(d)).variance;
      const SurfaceEstimator est(ball, profile, indicator(), a);
      const auto emp = variance_empirical(est, a, Lattice::cubic(d), 10000, 7).summary;
      const double z = (emp.variance - exact) / emp.se_variance;
      pass = pass && std::abs(z) <= 3.0;
      detail += fmt("%s%s d=%d z=%.2f", detail.empty() ? "" : "; ", bump ? "bump" : "gauss", d, z);
    }
  return {pass, detail};
}

// 4. Empirical variance slope in a (a = b) equals d - 1 +- 0.3.
Outcome variance_scaling() {
  bool pass = true;
  std::string detail;
  for (int d : {2, 3}) {
    const HalfspaceProfile profile(Psf::gaussian(d));
    const Phantom ball = Phantom::ball(d, 1.0);
    const std::vector<double> as{0.1, 0.05, 0.025};
    const std::vector<std::int64_t> reps = d == 2 ? std::vector<std::int64_t>{2000, 2000, 2000}
                                                  : std::vector<std::int64_t>{2000, 1000, 400};
    std::vector<double> vs;
    for (std::size_t i = 0; i < as.size(); ++i) {
      const SurfaceEstimator est(ball, profile, indicator(), as[i]);
      vs.push_back(variance_empirical(est, as[i], Lattice::cubic(d), reps[i], 41).summary.variance);
    }
    const double slope = loglog_fit(as, vs).slope;
    pass = pass && std::abs(slope - (d - 1)) <= 0.3;
    detail += fmt("%sd=%d slope %.3f", detail.empty() ? "" : "; ", d, slope);
  }
  return {pass, detail};
}

// 5. b = a^2: exact variance slope consistent with a^{-2} b^{d+1} = a^{2d} within 0.4.
Outcome fast_b_regime() {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const Phantom ball = Phantom::ball(2, 1.0);
  TruncationPolicy policy;
  policy.max_cutoff = 1024;
  const std::vector<double> as{0.1, 0.05, 0.025};
  std::vector<double> vs;
  for (double a : as) {
    vs.push_back(variance_exact_ball(ball, profile, indicator(), a, a * a, Lattice::cubic(2), policy).variance);
  }
  const double slope = loglog_fit(as, vs).slope;
  return {std::abs(slope - 4.0) <= 0.4, fmt("slope %.3f (target 4)", slope)};
}

// 6. Random radius s ~ C^3 bump on [1, 2]: a^{-(d-1)} empirical variance within 15% of the limit.
Outcome random_radius() {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const Phantom ball = Phantom::ball(2, 1.0);
  const RadiusDensity h(1.0, 2.0);
  const double a = 0.025;
  const auto theory = variance_asymptotic_random_radius(ball, h, profile, plateau(), a, Lattice::cubic(2));
  const auto emp = variance_empirical_random_radius(ball, h, profile, plateau(), a, a, Lattice::cubic(2), 20000, 11);
  const double ratio = emp.summary.variance / a / theory.constant;
  return {std::abs(ratio - 1.0) <= 0.15,
          fmt("limit %.6g empirical %.6g (se %.2g) ratio %.4f", theory.constant,
              emp.summary.variance / a, emp.summary.se_variance / a, ratio)};
}

// 7. Gap between the exact ball coefficient and the leading term decays like (R|xi|)^{-1}.
Outcome ball_fourier_leading_term() {
  const Psf psf = Psf::compact_bump(2);
  const HalfspaceProfile profile(psf);
  const double a = 0.2;
  const std::vector<double> rs{10, 20, 40, 80};
  std::vector<double> gaps;
  std::string detail = "gap/envelope:";
  for (double R : rs) {
    const double exact = ball_fourier_exact(psf, R, a, indicator(), 1.0);
    const double model = ball_fourier_asymptotic(R, a, a, a, indicator(), profile, Regime::Equal).abs2;
    gaps.push_back(std::abs(exact * exact - model) / ball_fourier_envelope(R, a, 1.0, indicator(), profile));
    detail += fmt(" %.3g", gaps.back());
  }
  const double rate = -loglog_fit(rs, gaps).slope;
  return {rate >= 0.8, detail + fmt("; rate %.3f", rate)};
}

// 8. Binary volume variance slope d + 1 +- 0.4; grey variance <= binary at every b.
Outcome volume_baselines() {
  const Psf psf = Psf::gaussian(2);
  const Phantom ball = Phantom::ball(2, 1.0);
  const std::vector<double> bs{0.04, 0.02, 0.01};
  std::vector<double> binary;
  bool grey_below = true;
  std::string detail;
  for (double b : bs) {
    const auto v = variance_empirical_volume(ball, psf, b, b, Lattice::cubic(2), 5000, 5);
    binary.push_back(v.binary.variance);
    grey_below = grey_below && v.grey.variance <= v.binary.variance;
    detail += fmt(" b=%g grey %.3g binary %.3g;", b, v.grey.variance, v.binary.variance);
  }
  const double slope = loglog_fit(bs, binary).slope;
  return {grey_below && std::abs(slope - 3.0) <= 0.4, fmt("binary slope %.3f;", slope) + detail};
}

// 9. Gaussian Hankel transform vs closed form (1e-8 relative); first zero of J_0.
Outcome bessel_hankel() {
  double worst = 0.0;
  for (int d : {2, 3}) {
    const double s = 0.7;
    const RadialFourier ft(d, [&](double r) { return std::exp(-kPi * r * r / (s * s)); }, 0.0, 8.0 * s);
    for (double rho : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0}) {
      const double exact = std::pow(s, d) * std::exp(-kPi * s * s * rho * rho);
      worst = std::max(worst, std::abs(ft.transform(rho) - exact) / exact);
    }
  }
  // J_0 has a single sign change in [2.3, 2.5]; bisect it
  double lo = 2.3, hi = 2.5;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(0.0, mid) > 0.0 ? lo : hi) = mid;
  }
  const double zero = 0.5 * (lo + hi);
  const double zero_err = std::abs(zero - 2.404825557695773);
  return {worst <= 1e-8 && zero_err <= 1e-10,
          fmt("hankel max rel err %.2e; J0 zero %.15f (err %.1e)", worst, zero, zero_err)};
}

// 10. Over a dense a-grid near 0.05, a^{-(d-1)} exact variance stays in [0, 2 main 1.05]
//     and its running max comes within 10% of the upper envelope 2 main.
Outcome oscillation_envelope() {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const Phantom ball = Phantom::ball(2, 1.0);
  const double constant =
      variance_asymptotic_isotropic(ball, profile, plateau(), 0.05, Lattice::cubic(2)).constant;
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double a = 0.045 + 0.01 * i / 60.0;
    const double v = variance_exact_ball(ball, profile, plateau(), a, a, Lattice::cubic(2)).variance;
    const double ratio = v / a / constant;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const bool pass = lo >= -0.05 && hi <= 2.0 * 1.05 && hi >= 2.0 * 0.9;
  return {pass, fmt("ratio to main term: min %.3f max %.3f (envelope [0, 2])", lo, hi)};
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"mean convergence", mean_convergence},
      {"poisson duality", poisson_duality},
      {"exact vs empirical variance", exact_vs_empirical},
      {"variance scaling a=b", variance_scaling},
      {"fast-b regime", fast_b_regime},
      {"random-radius variance", random_radius},
      {"ball fourier leading term", ball_fourier_leading_term},
      {"volume baselines", volume_baselines},
      {"bessel/hankel kernel", bessel_hankel},
      {"oscillation envelope", oscillation_envelope},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
  }
  return failures;
}
