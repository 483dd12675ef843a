#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "greyvar/errors.hpp"
#include "greyvar/estimator.hpp"
#include "greyvar/stats.hpp"

using namespace greyvar;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point vec(std::initializer_list<double> v) {
  Point p(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

Placement placement_at(const Lattice& l, double b, const Point& c) {
  return make_placement(l, b, c, Matrix::Identity(l.dim(), l.dim()));
}

// Direct evaluation of the defining sum with exact ball intensities at every window point.
double brute_estimate(const Phantom& x, const Psf& psf, const WeightFunction& f, double a,
                      double alpha, const Placement& p, const Box& window) {
  double sum = 0.0;
  for_each_point(p, window, [&](const Point& z) {
    sum += f(ball_intensity(psf, x.radius(), a, (z - x.center()).norm()));
  });
  return p.lattice.cell_volume() * std::pow(p.resolution, x.dim()) * sum / (a * alpha);
}

}  // namespace

TEST(Estimator, MatchesBruteForceSum) {
  const Psf psf = Psf::gaussian(2);
  const HalfspaceProfile profile(psf);
  const auto f = WeightFunction::smooth_plateau(0.2, 0.3, 0.7, 0.8);
  const Phantom x = Phantom::transformed_ball(2, 1.0, 1.0, vec({0.1, -0.2}));
  const SurfaceEstimator est(x, profile, f, 0.1);
  Rng rng(1);
  for (int i = 0; i < 3; ++i) {
    const Placement p = random_placement(Lattice::hexagonal(), 0.07, rng);
    const Box w = default_window(x, est.reach(), p);
    const double got = est.estimate(p, w).estimate;
    EXPECT_NEAR(got, brute_estimate(x, psf, f, 0.1, est.alpha(), p, w), 1e-6 * got);
  }
}

TEST(Estimator, EmptySupportGivesZero) {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const SurfaceEstimator est(Phantom::ball(2, 0.05), profile, WeightFunction::indicator(0.3, 0.7), 1.0);
  const auto r = est.estimate(make_placement(Lattice::cubic(2), 0.1));
  EXPECT_EQ(r.estimate, 0.0);
  EXPECT_EQ(r.support_points, 0);
}

TEST(Estimator, InvariantUnderScalingOfF) {
  const HalfspaceProfile profile(Psf::compact_bump(2));
  const auto f = WeightFunction::smooth_plateau(0.2, 0.3, 0.7, 0.8);
  const Phantom x = Phantom::ball(2, 1.0);
  Rng rng(2);
  const Placement p = random_placement(Lattice::cubic(2), 0.05, rng);
  const double base = SurfaceEstimator(x, profile, f, 0.1).estimate(p).estimate;
  for (double lambda : {2.0, -0.5, 8.0}) {
    EXPECT_EQ(SurfaceEstimator(x, profile, f.scaled(lambda), 0.1).estimate(p).estimate, base);
  }
  EXPECT_NEAR(SurfaceEstimator(x, profile, f.scaled(-3.7), 0.1).estimate(p).estimate, base,
              1e-13 * base);
}

TEST(Estimator, TranslationEquivariance) {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const Lattice l = Lattice::cubic(2);
  const double b = 0.05;
  const Point v = vec({0.3137, -0.271});
  const Point c = vec({0.21, 0.64});
  const SurfaceEstimator moved(Phantom::transformed_ball(2, 1.0, 1.0, v), profile, f, 0.05);
  const SurfaceEstimator fixed(Phantom::ball(2, 1.0), profile, f, 0.05);
  const double lhs = moved.estimate(placement_at(l, b, c)).estimate;
  const double rhs = fixed.estimate(placement_at(l, b, l.reduce_to_cell(c - v / b))).estimate;
  EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
}

TEST(Estimator, WindowBeyondTubeDoesNotMatter) {
  const HalfspaceProfile profile(Psf::gaussian(3));
  const SurfaceEstimator est(Phantom::ball(3, 1.0), profile, WeightFunction::indicator(0.3, 0.7), 0.1);
  Rng rng(4);
  const Placement p = random_placement(Lattice::cubic(3), 0.08, rng);
  const Box w = default_window(est.phantom(), est.reach(), p);
  const Box big{w.lo.array() - 0.5, w.hi.array() + 1.0};
  EXPECT_EQ(est.estimate(p, w).estimate, est.estimate(p, big).estimate);
  const Box small{Point::Constant(3, -0.5), Point::Constant(3, 0.5)};
  EXPECT_THROW(est.estimate(p, small), CoverageError);
}

TEST(Estimator, DoublingResolutionUsesCoarserSublattice) {
  const Psf psf = Psf::gaussian(2);
  const HalfspaceProfile profile(psf);
  const auto f = WeightFunction::indicator(0.3, 0.7);
  const Phantom x = Phantom::ball(2, 1.0);
  const SurfaceEstimator est(x, profile, f, 0.1);
  const Lattice l = Lattice::cubic(2);
  const double b = 0.04;
  // points of 2b Z^2 are the even-index points of b Z^2
  double sum = 0.0;
  for_each_point(placement_at(l, b, Point::Zero(2)), default_window(x, est.reach(), placement_at(l, 2 * b, Point::Zero(2))),
                 [&](const Point& z) {
                   const double i = std::round(z[0] / b), j = std::round(z[1] / b);
                   if (std::fmod(std::abs(i), 2.0) == 0.0 && std::fmod(std::abs(j), 2.0) == 0.0) {
                     sum += f(ball_intensity(psf, 1.0, 0.1, z.norm()));
                   }
                 });
  const double expected = std::pow(2 * b, 2) * sum / (0.1 * est.alpha());
  EXPECT_NEAR(est.estimate(placement_at(l, 2 * b, Point::Zero(2))).estimate, expected, 1e-9);
}

TEST(Estimator, HalfspaceUsesProfile) {
  const HalfspaceProfile profile(Psf::gaussian(2));
  // smooth f: the aligned Riemann sum along the normal converges fast
  const auto f = WeightFunction::smooth_plateau(0.2, 0.3, 0.7, 0.8);
  const SurfaceEstimator est(Phantom::half_space(vec({1, 0})), profile, f, 0.1);
  // window [-1,1]^2 cuts a boundary segment of length 2
  const Placement p = placement_at(Lattice::cubic(2), 0.01, Point::Constant(2, 0.5));
  const Box w{Point::Constant(2, -1.0), Point::Constant(2, 1.0)};
  EXPECT_NEAR(est.estimate(p, w).estimate, 2.0, 1e-3);
}

TEST(Estimator, MeanOverPlacementsApproachesPerimeter) {
  const HalfspaceProfile profile(Psf::gaussian(2));
  const SurfaceEstimator est(Phantom::ball(2, 1.0), profile, WeightFunction::indicator(0.3, 0.7), 0.05);
  const auto values = run_replicates(600, 9, 1, [&](std::int64_t, Rng& rng) {
    return est.estimate(random_placement(Lattice::cubic(2), 0.05, rng)).estimate;
  });
  const auto s = summarize(values);
  EXPECT_NEAR(s.mean, est.expected(), 4.0 * s.se_mean);
  EXPECT_NEAR(s.mean, kTwoPi, 0.02 * kTwoPi);
}

TEST(VolumeEstimator, GreyApproachesBinaryAsBlurVanishes) {
  const Phantom x = Phantom::ball(2, 1.0);
  Rng rng(8);
  const Placement p = random_placement(Lattice::cubic(2), 0.05, rng);
  const double binary = estimate_volume_binary(x, p);
  EXPECT_NEAR(estimate_volume_grey(x, Psf::compact_bump(2), 1e-4, p, default_window(x, 1e-4, p)),
              binary, 1e-9);
}

TEST(VolumeEstimator, GreyIsUnbiased) {
  const Phantom x = Phantom::ball(2, 1.0);
  const VolumeEstimator est(x, Psf::gaussian(2), 0.05);
  const auto values = run_replicates(500, 3, 1, [&](std::int64_t, Rng& rng) {
    return est.estimate(random_placement(Lattice::cubic(2), 0.05, rng));
  });
  const auto s = summarize(values);
  EXPECT_NEAR(s.mean, std::numbers::pi, 4.0 * s.se_mean + 1e-6);
}

TEST(VolumeEstimator, BinaryIsUnbiased) {
  const Phantom x = Phantom::ball(2, 1.0);
  const auto values = run_replicates(5000, 6, 1, [&](std::int64_t, Rng& rng) {
    return estimate_volume_binary(x, random_placement(Lattice::cubic(2), 0.02, rng));
  });
  const auto s = summarize(values);
  EXPECT_NEAR(s.mean, std::numbers::pi, 3.0 * s.se_mean);
}

TEST(VolumeEstimator, NoPointsGivesZero) {
  const Phantom x = Phantom::ball(2, 0.01);
  const Placement p = placement_at(Lattice::cubic(2), 1.0, Point::Constant(2, 0.5));
  EXPECT_EQ(estimate_volume_binary(x, p), 0.0);
}
