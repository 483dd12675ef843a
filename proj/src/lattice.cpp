#include "greyvar/lattice.hpp"

#include <algorithm>
#include <map>
#include <numbers>

#include "greyvar/errors.hpp"

namespace greyvar {

Rng replicate_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

Lattice::Lattice(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols() || (basis_.rows() != 2 && basis_.rows() != 3)) {
    throw DomainError("lattice.matrix must be a square 2x2 or 3x3 matrix");
  }
  if (!basis_.allFinite()) throw DomainError("lattice.matrix has non-finite entries");
  det_ = basis_.determinant();
  if (!(det_ > 0.0)) throw DomainError("lattice.matrix must have positive determinant");
  dual_ = basis_.inverse().transpose();
}

Lattice Lattice::cubic(int dim, double spacing) {
  return Lattice(spacing * Matrix::Identity(dim, dim));
}

Lattice Lattice::hexagonal(double spacing) {
  Matrix a(2, 2);
  a << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  return Lattice(spacing * a);
}

Point Lattice::reduce_to_cell(const Point& c) const {
  Point u = basis_.partialPivLu().solve(c);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u[i] -= std::floor(u[i]);
    if (u[i] >= 1.0) u[i] = 0.0;
  }
  return basis_ * u;
}

double Lattice::dual_covering_bound() const {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < dual_.cols(); ++j) sum += dual_.col(j).norm();
  return 0.5 * sum;
}

namespace {

void check_rotation(const Matrix& q, int dim) {
  if (q.rows() != dim || q.cols() != dim) throw DomainError("rotation has wrong shape");
  const double err = (q.transpose() * q - Matrix::Identity(dim, dim)).norm();
  if (err > 1e-12 || q.determinant() < 0.0) {
    throw DomainError("rotation must be orthogonal with determinant +1");
  }
}

}  // namespace

Placement make_placement(const Lattice& lattice, double b, const Point& c, const Matrix& q) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("resolution b must be positive");
  if (c.size() != lattice.dim()) throw DomainError("offset has wrong dimension");
  check_rotation(q, lattice.dim());
  return Placement{lattice, b, lattice.reduce_to_cell(c), q};
}

Placement make_placement(const Lattice& lattice, double b) {
  const int d = lattice.dim();
  return make_placement(lattice, b, Point::Zero(d), Matrix::Identity(d, d));
}

Matrix random_rotation(int dim, Rng& rng) {
  if (dim == 2) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double t = angle(rng);
    Matrix q(2, 2);
    q << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return q;
  }
  if (dim == 3) {
    std::normal_distribution<double> normal;
    double w, x, y, z, n;
    do {
      w = normal(rng);
      x = normal(rng);
      y = normal(rng);
      z = normal(rng);
      n = std::sqrt(w * w + x * x + y * y + z * z);
    } while (n < 1e-12);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    Matrix q(3, 3);
    q << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
        2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
        2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
    return q;
  }
  throw DomainError("random_rotation: dimension must be 2 or 3");
}

Placement random_placement(const Lattice& lattice, double b, Rng& rng) {
  if (!(b > 0.0)) throw DomainError("resolution b must be positive");
  const int d = lattice.dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point u(d);
  for (int i = 0; i < d; ++i) u[i] = unit(rng);
  Matrix q = random_rotation(d, rng);
  return Placement{lattice, b, lattice.basis() * u, std::move(q)};
}

bool Box::contains(const Point& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
  }
  return true;
}

bool Box::degenerate() const {
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) return true;
  }
  return false;
}

void for_each_point(const Placement& placement, const Box& box,
                    const std::function<void(const Point&)>& fn) {
  const int d = placement.lattice.dim();
  if (box.lo.size() != d || box.hi.size() != d) throw DomainError("box has wrong dimension");
  if (box.degenerate()) return;
  const Matrix m = placement.generator();
  const Point o = placement.origin();
  const Matrix inv = m.inverse();
  // index ranges from the images of the box corners
  std::vector<long> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (int corner = 0; corner < (1 << d); ++corner) {
      Point z(d);
      for (int j = 0; j < d; ++j) z[j] = (corner >> j) & 1 ? box.hi[j] : box.lo[j];
      const double k = inv.row(i).dot(z - o);
      mn = std::min(mn, k);
      mx = std::max(mx, k);
    }
    lo[i] = static_cast<long>(std::floor(mn)) - 1;
    hi[i] = static_cast<long>(std::ceil(mx)) + 1;
  }
  Point k(d);
  Point z(d);
  std::vector<long> idx(lo);
  while (true) {
    for (int i = 0; i < d; ++i) k[i] = static_cast<double>(idx[i]);
    z.noalias() = m * k + o;
    if (box.contains(z)) fn(z);
    int i = 0;
    while (i < d && ++idx[i] > hi[i]) {
      idx[i] = lo[i];
      ++i;
    }
    if (i == d) break;
  }
}

std::vector<Point> enumerate_points(const Placement& placement, const Box& box) {
  std::vector<Point> out;
  for_each_point(placement, box, [&](const Point& z) { out.push_back(z); });
  return out;
}

namespace detail {

std::optional<std::pair<long, long>> quadratic_range(const double* u, const double* w, int dim,
                                                     double r) {
  double ww = 0.0, uw = 0.0, uu = 0.0;
  for (int j = 0; j < dim; ++j) {
    ww += w[j] * w[j];
    uw += u[j] * w[j];
    uu += u[j] * u[j];
  }
  if (ww <= 0.0) return std::nullopt;
  const double disc = uw * uw - ww * (uu - r * r);
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double lo = std::ceil((-uw - root) / ww);
  const double hi = std::floor((-uw + root) / ww);
  if (lo > hi) return std::nullopt;
  return std::make_pair(static_cast<long>(lo), static_cast<long>(hi));
}

namespace {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += a[j] * b[j];
  return s;
}

// component of v orthogonal to the unit vectors in `basis`
Vec3 reject(Vec3 v, const std::vector<Vec3>& basis, int d) {
  for (const Vec3& e : basis) {
    const double c = dot(v, e, d);
    for (int j = 0; j < d; ++j) v[j] -= c * e[j];
  }
  return v;
}

}  // namespace

void lines_in_ball(const Matrix& generator, const Point& origin, double r,
                   const std::function<void(const Line&)>& fn) {
  const int d = static_cast<int>(generator.rows());
  std::vector<Vec3> cols(d, Vec3{0, 0, 0});
  Vec3 o{0, 0, 0};
  for (int j = 0; j < d; ++j) {
    o[j] = origin[j];
    for (int i = 0; i < d; ++i) cols[j][i] = generator(i, j);
  }
  // Orthonormal frame built from the last columns backwards: level i works in the
  // complement of span(cols[i+1..d-1]).
  std::vector<Vec3> frame;  // unit vectors spanning cols[i+1..]
  std::vector<std::vector<Vec3>> complement(d);
  for (int i = d - 1; i >= 0; --i) {
    complement[i] = frame;
    Vec3 e = reject(cols[i], frame, d);
    const double n = std::sqrt(dot(e, e, d));
    for (int j = 0; j < d; ++j) e[j] /= n;
    frame.push_back(e);
  }

  Line line{};
  for (int j = 0; j < d; ++j) line.step[j] = cols[d - 1][j];

  // Recursive descent over the leading indices.
  std::function<void(int, const Vec3&)> descend = [&](int level, const Vec3& base) {
    const Vec3 u = reject(base, complement[level], d);
    const Vec3 w = reject(cols[level], complement[level], d);
    const auto range = quadratic_range(u.data(), w.data(), d, r);
    if (!range) return;
    if (level == d - 1) {
      for (int j = 0; j < d; ++j) line.base[j] = base[j];
      line.k_lo = range->first;
      line.k_hi = range->second;
      fn(line);
      return;
    }
    for (long k = range->first; k <= range->second; ++k) {
      Vec3 next = base;
      for (int j = 0; j < d; ++j) next[j] += k * cols[level][j];
      descend(level + 1, next);
    }
  };
  descend(0, o);
}

}  // namespace detail

std::int64_t count_in_ball(const Placement& placement, double r) {
  if (!(r >= 0.0)) return 0;
  std::int64_t count = 0;
  detail::lines_in_ball(placement.generator(), placement.origin(), r,
                        [&](const detail::Line& line) { count += line.k_hi - line.k_lo + 1; });
  return count;
}

namespace {

// If the dual Gram matrix is an integer multiple of some unit, return that unit and
// the integer Gram entries so that norms can be grouped exactly.
std::optional<std::pair<double, Eigen::MatrixXi>> integral_gram(const Matrix& gram) {
  const double g00 = gram(0, 0);
  for (int m = 1; m <= 12; ++m) {
    const double unit = g00 / m;
    Eigen::MatrixXi ints(gram.rows(), gram.cols());
    bool ok = true;
    for (Eigen::Index i = 0; i < gram.rows() && ok; ++i) {
      for (Eigen::Index j = 0; j < gram.cols() && ok; ++j) {
        const double v = gram(i, j) / unit;
        const double rv = std::round(v);
        if (std::abs(v - rv) > 1e-9 * std::max(1.0, std::abs(v))) ok = false;
        ints(i, j) = static_cast<int>(rv);
      }
    }
    if (ok) return std::make_pair(unit, ints);
  }
  return std::nullopt;
}

}  // namespace

std::vector<Shell> dual_shells(const Lattice& lattice, double cutoff) {
  const int d = lattice.dim();
  const Matrix& dual = lattice.dual_basis();
  const double reach = cutoff * (1.0 + 1e-12);
  std::vector<Shell> shells;
  if (!(cutoff > 0.0)) return shells;

  const Matrix gram = dual.transpose() * dual;
  if (auto integral = integral_gram(gram)) {
    const double unit = integral->first;
    const Eigen::MatrixXi& g = integral->second;
    const auto max_n = static_cast<std::size_t>(std::floor(reach * reach / unit)) + 1;
    std::vector<std::int64_t> hist(max_n + 1, 0);
    const Matrix inv_dual = dual.inverse();
    detail::lines_in_ball(dual, Point::Zero(d), reach, [&](const detail::Line& line) {
      // recover integer coordinates of the line base
      Eigen::VectorXd base(d);
      for (int j = 0; j < d; ++j) base[j] = line.base[j];
      const Eigen::VectorXd kf = inv_dual * base;
      std::array<long, 3> k{0, 0, 0};
      for (int j = 0; j < d; ++j) k[j] = std::lround(kf[j]);
      // n(t) = c0 + c1 t + c2 t^2 along the line, stepped by finite differences
      const int last = d - 1;
      long c0 = 0;
      long c1 = 0;
      for (int i = 0; i < last; ++i) {
        c1 += 2L * g(i, last) * k[i];
        for (int j = 0; j < last; ++j) c0 += static_cast<long>(g(i, j)) * k[i] * k[j];
      }
      const long c2 = g(last, last);
      long t = line.k_lo;
      long n = c0 + c1 * t + c2 * t * t;
      for (; t <= line.k_hi; ++t) {
        if (n > 0 && static_cast<std::size_t>(n) <= max_n) ++hist[static_cast<std::size_t>(n)];
        n += c1 + c2 * (2 * t + 1);
      }
    });
    for (std::size_t n = 1; n < hist.size(); ++n) {
      if (hist[n] == 0) continue;
      const double norm = std::sqrt(unit * static_cast<double>(n));
      if (norm <= reach) shells.push_back({norm, hist[n]});
    }
    return shells;
  }

  std::vector<double> norms;
  detail::lines_in_ball(dual, Point::Zero(d), reach, [&](const detail::Line& line) {
    for (long t = line.k_lo; t <= line.k_hi; ++t) {
      double n2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double x = line.base[j] + t * line.step[j];
        n2 += x * x;
      }
      const double n = std::sqrt(n2);
      if (n > 1e-12 && n <= reach) norms.push_back(n);
    }
  });
  std::sort(norms.begin(), norms.end());
  for (double n : norms) {
    if (!shells.empty() && n - shells.back().norm <= 1e-9) {
      ++shells.back().multiplicity;
    } else {
      shells.push_back({n, 1});
    }
  }
  return shells;
}

}  // namespace greyvar
