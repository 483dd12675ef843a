#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "greyvar/errors.hpp"
#include "greyvar/lattice.hpp"
#include "greyvar/psf.hpp"

using namespace greyvar;

namespace {

Matrix skew2() {
  Matrix a(2, 2);
  a << 1.0, 0.37, 0.0, 0.81;
  return a;
}

Matrix skew3() {
  Matrix a(3, 3);
  a << 1.0, 0.2, -0.1, 0.0, 0.9, 0.3, 0.0, 0.0, 1.1;
  return a;
}

// Brute-force |xi| histogram over integer coefficients of the dual basis.
std::vector<Shell> brute_shells(const Lattice& lattice, double cutoff, int range) {
  const int d = lattice.dim();
  std::vector<double> norms;
  std::vector<int> k(d, -range);
  while (true) {
    Point z = Point::Zero(d);
    for (int j = 0; j < d; ++j) z += k[j] * lattice.dual_basis().col(j);
    const double n = z.norm();
    if (n > 0.0 && n <= cutoff) norms.push_back(n);
    int j = 0;
    while (j < d && ++k[j] > range) k[j++] = -range;
    if (j == d) break;
  }
  std::sort(norms.begin(), norms.end());
  std::vector<Shell> out;
  for (double n : norms) {
    if (!out.empty() && n - out.back().norm < 1e-9) {
      ++out.back().multiplicity;
    } else {
      out.push_back({n, 1});
    }
  }
  return out;
}

void expect_same_shells(const std::vector<Shell>& a, const std::vector<Shell>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].norm, b[i].norm, 1e-9);
    EXPECT_EQ(a[i].multiplicity, b[i].multiplicity) << a[i].norm << " vs " << b[i].norm;
  }
}

Box box(int d, double lo, double hi) { return {Point::Constant(d, lo), Point::Constant(d, hi)}; }

}  // namespace

TEST(Lattice, DualConventionAndCellVolume) {
  const Lattice l(skew2());
  EXPECT_NEAR(l.cell_volume(), 0.81, 1e-15);
  const Matrix m = l.basis().transpose() * l.dual_basis();
  EXPECT_TRUE(m.isApprox(Matrix::Identity(2, 2), 1e-14));
  Matrix bad(2, 2);
  bad << 1, 0, 0, -1;
  EXPECT_THROW(Lattice{bad}, DomainError);
  EXPECT_NEAR(Lattice::hexagonal().cell_volume(), std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(Lattice, ReduceToCell) {
  const Lattice l(skew2());
  Point c(2);
  c << 3.7, -2.2;
  const Point r = l.reduce_to_cell(c);
  const Point u = l.basis().inverse() * r;
  for (int j = 0; j < 2; ++j) {
    EXPECT_GE(u[j], 0.0);
    EXPECT_LT(u[j], 1.0);
  }
  const Point k = l.basis().inverse() * (c - r);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(k[j], std::round(k[j]), 1e-12);
}

TEST(Enumeration, UnitSquareExamples) {
  const Lattice z2 = Lattice::cubic(2);
  auto pts = enumerate_points(make_placement(z2, 1.0), box(2, 0.0, 2.0));
  EXPECT_EQ(pts.size(), 4u);
  std::vector<std::pair<double, double>> got;
  for (const auto& p : pts) got.emplace_back(p[0], p[1]);
  std::sort(got.begin(), got.end());
  const std::vector<std::pair<double, double>> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(enumerate_points(make_placement(z2, 0.5), box(2, 0.0, 2.0)).size(), 16u);
}

TEST(Enumeration, MatchesBruteForceOnRandomPlacements) {
  Rng rng(11);
  for (const Matrix& a : {skew2(), skew3()}) {
    const Lattice l(a);
    const int d = l.dim();
    for (int trial = 0; trial < 5; ++trial) {
      const Placement p = random_placement(l, 0.13, rng);
      const Box b = box(d, -0.4, 0.6);
      std::int64_t brute = 0;
      const int range = 20;
      std::vector<int> k(d, -range);
      while (true) {
        Point z = p.origin();
        for (int j = 0; j < d; ++j) z += k[j] * p.generator().col(j);
        if (b.contains(z)) ++brute;
        int j = 0;
        while (j < d && ++k[j] > range) k[j++] = -range;
        if (j == d) break;
      }
      EXPECT_EQ(static_cast<std::int64_t>(enumerate_points(p, b).size()), brute);
      // count roughly b^{-d} / c_L per unit volume
      const double expected = 1.0 / (std::pow(0.13, d) * l.cell_volume());
      EXPECT_NEAR(brute, expected, 0.25 * expected);
    }
  }
}

TEST(Enumeration, BallCountAndShellVisitsMatchBruteForce) {
  Rng rng(5);
  const Lattice l(skew3());
  const Placement p = random_placement(l, 0.21, rng);
  std::int64_t inside = 0, shell = 0;
  for (const auto& z : enumerate_points(p, box(3, -2.0, 2.0))) {
    const double n = z.norm();
    inside += n <= 1.3;
    shell += n >= 0.9 && n <= 1.3;
  }
  EXPECT_EQ(count_in_ball(p, 1.3), inside);
  std::int64_t visited = 0;
  for_each_in_shell(p, 0.9, 1.3, [&](double n) {
    EXPECT_GE(n, 0.9);
    EXPECT_LE(n, 1.3);
    ++visited;
  });
  EXPECT_EQ(visited, shell);
}

TEST(Shells, SmallExamples) {
  expect_same_shells(dual_shells(Lattice::cubic(2), 1.0), {{1.0, 4}});
  expect_same_shells(dual_shells(Lattice::cubic(2), 1.5), {{1.0, 4}, {std::sqrt(2.0), 4}});
  const auto z3 = dual_shells(Lattice::cubic(3), std::sqrt(3.0));
  ASSERT_EQ(z3.size(), 3u);
  EXPECT_EQ(z3[0].multiplicity, 6);
  EXPECT_EQ(z3[1].multiplicity, 12);
  EXPECT_EQ(z3[2].multiplicity, 8);
}

TEST(Shells, MatchBruteForce) {
  expect_same_shells(dual_shells(Lattice::cubic(2), 12.0), brute_shells(Lattice::cubic(2), 12.0, 13));
  expect_same_shells(dual_shells(Lattice::cubic(3), 5.0), brute_shells(Lattice::cubic(3), 5.0, 6));
  expect_same_shells(dual_shells(Lattice::hexagonal(), 6.3),
                     brute_shells(Lattice::hexagonal(), 6.3, 12));
  expect_same_shells(dual_shells(Lattice(skew2()), 5.0), brute_shells(Lattice(skew2()), 5.0, 12));
  expect_same_shells(dual_shells(Lattice(skew3()), 3.0), brute_shells(Lattice(skew3()), 3.0, 8));
}

TEST(Shells, CoveringBoundHolds) {
  // every point of a fine grid in the cell lies within the bound of a dual point
  for (const Lattice& l : {Lattice(skew2()), Lattice::hexagonal()}) {
    const double bound = l.dual_covering_bound();
    const Matrix& g = l.dual_basis();
    for (double u = 0; u < 1; u += 0.05)
      for (double v = 0; v < 1; v += 0.05) {
        const Point x = u * g.col(0) + v * g.col(1);
        double best = 1e9;
        for (int i = -1; i <= 2; ++i)
          for (int j = -1; j <= 2; ++j) best = std::min(best, (x - i * g.col(0) - j * g.col(1)).norm());
        EXPECT_LE(best, bound + 1e-12);
      }
  }
}

TEST(PoissonSummation, GaussianOnSkewLattices) {
  // g(x) = exp(-pi |x|^2 / s^2), F(g)(k) = s^d exp(-pi s^2 |k|^2)
  const double s = 0.9;
  for (const Lattice& l : {Lattice(skew2()), Lattice(skew3()), Lattice::hexagonal()}) {
    const int d = l.dim();
    for (double b : {0.5, 0.8}) {
      const Placement p = make_placement(l, b);
      double spatial = 0.0;
      for_each_in_shell(p, 0.0, 12.0 * s, [&](double r) { spatial += std::exp(-std::numbers::pi * r * r / (s * s)); });
      double dual = std::pow(s, d);
      for (const Shell& sh : dual_shells(l, 8.0 * b / s)) {
        const double k = sh.norm / b;
        dual += sh.multiplicity * std::pow(s, d) * std::exp(-std::numbers::pi * s * s * k * k);
      }
      dual /= std::pow(b, d) * l.cell_volume();
      EXPECT_NEAR(spatial / dual, 1.0, 1e-10) << d << " " << b;
    }
  }
}

TEST(Placement, RejectsInvalidRotation) {
  Matrix q(2, 2);
  q << 1, 0, 0, -1;
  EXPECT_THROW(make_placement(Lattice::cubic(2), 1.0, Point::Zero(2), q), DomainError);
  EXPECT_THROW(make_placement(Lattice::cubic(2), 0.0), DomainError);
}

TEST(RandomPlacement, OffsetMeanIsCellCentre) {
  const Lattice l(skew2());
  Rng rng(3);
  const int n = 100000;
  Point sum = Point::Zero(2);
  for (int i = 0; i < n; ++i) sum += random_placement(l, 1.0, rng).offset;
  const Point mean = sum / n;
  const Point centre = l.basis() * Point::Constant(2, 0.5);
  // per-coordinate sd of A u is at most |row| / sqrt(12)
  for (int j = 0; j < 2; ++j) {
    const double sd = l.basis().row(j).norm() / std::sqrt(12.0 * n);
    EXPECT_NEAR(mean[j], centre[j], 3.0 * sd);
  }
}

TEST(RandomRotation, HaarUniformChiSquare) {
  const int n = 100000;
  const int bins = 20;
  for (int d : {2, 3}) {
    Rng rng(17 + d);
    std::vector<int> count(bins, 0);
    for (int i = 0; i < n; ++i) {
      const Matrix q = random_rotation(d, rng);
      ASSERT_NEAR(q.determinant(), 1.0, 1e-12);
      ASSERT_TRUE((q.transpose() * q).isApprox(Matrix::Identity(d, d), 1e-12));
      const Point e = q.col(0);
      // equal-area bins: polar angle in the plane, height on the sphere (Archimedes)
      const double u = d == 2 ? (std::atan2(e[1], e[0]) + std::numbers::pi) / (2 * std::numbers::pi)
                              : 0.5 * (e[2] + 1.0);
      ++count[std::min(bins - 1, static_cast<int>(u * bins))];
    }
    double chi2 = 0.0;
    const double expected = static_cast<double>(n) / bins;
    for (int c : count) chi2 += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(bins - 1);
    EXPECT_GT(1.0 - boost::math::cdf(dist, chi2), 0.01) << "d=" << d << " chi2=" << chi2;
  }
}

TEST(ReplicateRng, StreamsAreReproducibleAndDistinct) {
  Rng a = replicate_rng(42, 7), b = replicate_rng(42, 7), c = replicate_rng(42, 8);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}
