/**
 * @file lattice.hpp
 * @brief Observation lattices bQ(AZ^d + c), dual lattices and point enumeration.
 *
 * Points of a placement are z = bQ(Ak + c), k in Z^d. The dual lattice is
 * A^{-T} Z^d, the convention under which Poisson summation reads
 *   sum_{z in bL} g(z) = b^{-d} c_L^{-1} sum_{xi in L*} F(g)(xi / b).
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace greyvar {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Independent stream for replicate `index` of a run seeded with `seed`.
Rng replicate_rng(std::uint64_t seed, std::uint64_t index);

class Lattice {
 public:
  /// Columns of `basis` generate the lattice. Throws DomainError unless det > 0.
  explicit Lattice(Matrix basis);

  static Lattice cubic(int dim, double spacing = 1.0);
  /// Triangular (hexagonal) lattice in the plane with unit nearest-neighbour distance.
  static Lattice hexagonal(double spacing = 1.0);

  int dim() const noexcept { return static_cast<int>(basis_.rows()); }
  const Matrix& basis() const noexcept { return basis_; }
  /// c_L = det A, volume of the fundamental cell A[0,1)^d.
  double cell_volume() const noexcept { return det_; }
  /// A^{-T}; columns generate the dual lattice.
  const Matrix& dual_basis() const noexcept { return dual_; }
  /// Reduce c into the fundamental cell A[0,1)^d.
  Point reduce_to_cell(const Point& c) const;
  /// Radius r such that every point of R^d lies within r of a dual lattice point.
  double dual_covering_bound() const;

 private:
  Matrix basis_;
  Matrix dual_;
  double det_;
};

/// bQ(L + c): a lattice at resolution b, translated by c in C_L and rotated by Q.
struct Placement {
  Lattice lattice;
  double resolution;
  Point offset;     // c, reduced into the fundamental cell
  Matrix rotation;  // Q in SO(d)

  /// bQA: columns step between neighbouring points.
  Matrix generator() const { return resolution * rotation * lattice.basis(); }
  /// bQc: the image of the lattice origin.
  Point origin() const { return resolution * rotation * offset; }
};

/// Validates b > 0 and Q orthogonal with det +1, reduces c into the cell.
Placement make_placement(const Lattice& lattice, double b, const Point& c, const Matrix& q);
Placement make_placement(const Lattice& lattice, double b);

/// Haar-uniform rotation: uniform angle for d = 2, uniform unit quaternion for d = 3.
Matrix random_rotation(int dim, Rng& rng);
/// c = A u with u uniform on [0,1)^d, Q Haar-uniform.
Placement random_placement(const Lattice& lattice, double b, Rng& rng);

/// Half-open axis-aligned box [lo, hi).
struct Box {
  Point lo;
  Point hi;
  bool contains(const Point& x) const;
  bool degenerate() const;
};

/// Calls fn(z) for every point of the placement inside the box, each once.
void for_each_point(const Placement& placement, const Box& box,
                    const std::function<void(const Point&)>& fn);
std::vector<Point> enumerate_points(const Placement& placement, const Box& box);

namespace detail {

struct Line {
  double base[3];
  double step[3];
  long k_lo;
  long k_hi;
};

/// Integer range {k : |u + k w|^2 <= r^2}; empty optional if none.
std::optional<std::pair<long, long>> quadratic_range(const double* u, const double* w, int dim,
                                                     double r);

/// Lines z = base + k step (k in [k_lo, k_hi]) covering the points of M Z^d + o inside B(r).
void lines_in_ball(const Matrix& generator, const Point& origin, double r,
                   const std::function<void(const Line&)>& fn);

}  // namespace detail

/// Number of placement points with |z| <= r. Cost is linear in the number of lattice lines.
std::int64_t count_in_ball(const Placement& placement, double r);

/// Calls fn(|z|) for every placement point with r_in <= |z| <= r_out.
template <class F>
void for_each_in_shell(const Placement& placement, double r_in, double r_out, F&& fn) {
  if (!(r_out >= 0.0) || r_out < r_in) return;
  const int dim = placement.lattice.dim();
  const double in2 = r_in * r_in;
  const double out2 = r_out * r_out;
  detail::lines_in_ball(placement.generator(), placement.origin(), r_out,
                        [&](const detail::Line& line) {
                          long skip_lo = 1;
                          long skip_hi = 0;
                          if (r_in > 0.0) {
                            // strictly inside the inner ball: shrink slightly so that
                            // boundary points are re-checked explicitly below
                            if (auto inner = detail::quadratic_range(line.base, line.step, dim,
                                                                     r_in * (1.0 - 1e-12))) {
                              skip_lo = inner->first;
                              skip_hi = inner->second;
                            }
                          }
                          auto visit = [&](long k) {
                            double n2 = 0.0;
                            for (int j = 0; j < dim; ++j) {
                              const double x = line.base[j] + k * line.step[j];
                              n2 += x * x;
                            }
                            if (n2 >= in2 && n2 <= out2) fn(std::sqrt(n2));
                          };
                          for (long k = line.k_lo; k <= line.k_hi; ++k) {
                            if (k >= skip_lo && k <= skip_hi) {
                              k = skip_hi;
                              continue;
                            }
                            visit(k);
                          }
                        });
}

struct Shell {
  double norm;
  std::int64_t multiplicity;
};

/// Dual lattice points xi != 0 with |xi| <= cutoff grouped by norm (tolerance 1e-9),
/// ascending. Returns an empty list when the cutoff is below the shortest dual vector.
std::vector<Shell> dual_shells(const Lattice& lattice, double cutoff);

}  // namespace greyvar
