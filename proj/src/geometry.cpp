#include "kitecc/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "kitecc/error.hpp"

namespace kitecc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateConfiguration: return "degenerate configuration";
    case ErrorKind::FormulaInapplicable: return "formula inapplicable";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::AmbiguousFit: return "ambiguous fit";
    case ErrorKind::DivisionByZero: return "division by zero";
    case ErrorKind::InconsistentInput: return "inconsistent input";
    case ErrorKind::DegenerateKite: return "degenerate kite";
    case ErrorKind::NearSingular: return "near-singular evaluation";
    case ErrorKind::Bracket: return "bracket error";
    case ErrorKind::IllPosedSlice: return "ill-posed slice";
    case ErrorKind::Decomposition: return "decomposition error";
    case ErrorKind::Divergence: return "divergence";
  }
  return "error";
}

namespace {

using Mat5 = Eigen::Matrix<double, 5, 5>;

Mat5 bordered_matrix(const DistanceVector& d) {
  Mat5 m = Mat5::Ones();
  m(0, 0) = 0.0;
  for (int i = 1; i < 5; ++i) m(i, i) = 0.0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    const double x = d[k] * d[k];
    m(i + 1, j + 1) = x;
    m(j + 1, i + 1) = x;
  }
  return m;
}

// Determinant of m with the listed rows and columns deleted.
template <std::size_t N>
double reduced_det(const Mat5& m, const std::array<int, N>& rows, const std::array<int, N>& cols) {
  constexpr int n = 5 - static_cast<int>(N);
  Eigen::Matrix<double, n, n> sub;
  int ri = 0;
  for (int r = 0; r < 5; ++r) {
    if (std::find(rows.begin(), rows.end(), r) != rows.end()) continue;
    int ci = 0;
    for (int c = 0; c < 5; ++c) {
      if (std::find(cols.begin(), cols.end(), c) != cols.end()) continue;
      sub(ri, ci++) = m(r, c);
    }
    ++ri;
  }
  if constexpr (n == 0) {
    return 1.0;
  } else {
    return sub.determinant();
  }
}

double cofactor(const Mat5& m, int p, int q) {
  const double sign = ((p + q) % 2 == 0) ? 1.0 : -1.0;
  return sign * reduced_det<1>(m, {p}, {q});
}

// Second derivative of det(m) with respect to entries (p, q) and (r, s),
// treating all 25 entries as independent.
double det_second_derivative(const Mat5& m, int p, int q, int r, int s) {
  if (p == r || q == s) return 0.0;
  const double parity = ((p + q + r + s) % 2 == 0) ? 1.0 : -1.0;
  const double order = ((r > p) == (s > q)) ? 1.0 : -1.0;
  return parity * order * reduced_det<2>(m, {p, r}, {q, s});
}

double shoelace(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double cross_turn(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
}

}  // namespace

double DistanceVector::max() const { return *std::max_element(r_.begin(), r_.end()); }

bool DistanceVector::all_positive() const {
  return std::all_of(r_.begin(), r_.end(), [](double r) { return r > 0.0; });
}

bool DistanceVector::satisfies_triangle_inequalities() const {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        const double x = between(i, j), y = between(j, k), z = between(i, k);
        if (!(x + y > z && y + z > x && x + z > y)) return false;
      }
    }
  }
  return true;
}

DistanceVector DistanceVector::scaled(double t) const {
  PairValues r = r_;
  for (auto& v : r) v *= t;
  return DistanceVector(r);
}

PairValues OrientedAreas::pair_products() const {
  PairValues out{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    out[k] = a[i] * a[j];
  }
  return out;
}

DistanceVector mutual_distances(const PlanarConfig& config) {
  PairValues r{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    const Point2& p = config.positions[i];
    const Point2& q = config.positions[j];
    r[k] = std::hypot(p.x - q.x, p.y - q.y);
    if (!(r[k] > 0.0)) {
      throw Error(ErrorKind::DegenerateConfiguration,
                  "bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                      " coincide");
    }
  }
  return DistanceVector(r);
}

double cayley_menger(const DistanceVector& d) { return bordered_matrix(d).determinant(); }

double planarity_scale(const DistanceVector& d) { return std::max(1.0, std::pow(d.max(), 8)); }

PairValues cayley_menger_gradient_unchecked(const DistanceVector& d) {
  const Mat5 m = bordered_matrix(d);
  PairValues g{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    // r_ij^2 sits at (i+1, j+1) and (j+1, i+1); the matrix is symmetric.
    g[k] = 2.0 * cofactor(m, i + 1, j + 1);
  }
  return g;
}

PairValues cayley_menger_gradient(const DistanceVector& d, double tol) {
  const double v = cayley_menger(d);
  if (std::abs(v) > tol * planarity_scale(d)) {
    throw Error(ErrorKind::FormulaInapplicable,
                "distances are not planar (|V| = " + std::to_string(std::abs(v)) + ")");
  }
  return cayley_menger_gradient_unchecked(d);
}

std::array<PairValues, kPairs> cayley_menger_hessian(const DistanceVector& d) {
  const Mat5 m = bordered_matrix(d);
  std::array<PairValues, kPairs> h{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    const int a = kPairBodies[k].first + 1, b = kPairBodies[k].second + 1;
    for (std::size_t l = 0; l < kPairs; ++l) {
      const int c = kPairBodies[l].first + 1, e = kPairBodies[l].second + 1;
      h[k][l] = det_second_derivative(m, a, b, c, e) + det_second_derivative(m, a, b, e, c) +
                det_second_derivative(m, b, a, c, e) + det_second_derivative(m, b, a, e, c);
    }
  }
  return h;
}

PairValues cayley_menger_gradient_from_areas(const OrientedAreas& areas) {
  PairValues g = areas.pair_products();
  for (auto& v : g) v *= -32.0;
  return g;
}

OrientedAreas oriented_areas(const PlanarConfig& config) {
  const auto& q = config.positions;
  OrientedAreas out;
  // Alternating sign makes A1, A3 > 0 and A2, A4 < 0 for a CCW convex
  // quadrilateral, and sum(A_i) = 0 identically.
  out.a[0] = shoelace(q[1], q[2], q[3]);
  out.a[1] = -shoelace(q[0], q[2], q[3]);
  out.a[2] = shoelace(q[0], q[1], q[3]);
  out.a[3] = -shoelace(q[0], q[1], q[2]);
  return out;
}

bool is_realizable_planar(const DistanceVector& d, double tol) {
  if (!d.all_positive() || !d.satisfies_triangle_inequalities()) return false;
  return std::abs(cayley_menger(d)) <= tol * planarity_scale(d);
}

bool convexity_order_check(const PlanarConfig& config) {
  const auto& q = config.positions;
  for (std::size_t i = 0; i < kBodies; ++i) {
    if (!(cross_turn(q[i], q[(i + 1) % 4], q[(i + 2) % 4]) > 0.0)) return false;
  }
  return true;
}

std::optional<PlanarConfig> realize_planar(const DistanceVector& d, double tol) {
  if (!d.all_positive()) return std::nullopt;
  const double r12 = d.r12(), r13 = d.r13(), r14 = d.r14();
  const double r23 = d.r23(), r24 = d.r24(), r34 = d.r34();
  const double scale = d.max();

  auto height = [&](double side, double x) -> std::optional<double> {
    const double h2 = side * side - x * x;
    if (h2 < -tol * scale * scale) return std::nullopt;
    return std::sqrt(std::max(0.0, h2));
  };

  const double x3 = (r12 * r12 + r13 * r13 - r23 * r23) / (2.0 * r12);
  const double x4 = (r12 * r12 + r14 * r14 - r24 * r24) / (2.0 * r12);
  const auto y3 = height(r13, x3);
  const auto y4 = height(r14, x4);
  if (!y3 || !y4) return std::nullopt;

  PlanarConfig config;
  config.positions = {Point2{0.0, 0.0}, Point2{r12, 0.0}, Point2{x3, *y3}, Point2{x4, *y4}};
  const double up = std::abs(std::hypot(x3 - x4, *y3 - *y4) - r34);
  const double down = std::abs(std::hypot(x3 - x4, *y3 + *y4) - r34);
  if (down < up) config.positions[3].y = -*y4;
  if (std::min(up, down) > tol * scale) return std::nullopt;

  if (!convexity_order_check(config)) {
    PlanarConfig mirrored = config;
    for (auto& p : mirrored.positions) p.y = -p.y;
    if (convexity_order_check(mirrored)) return mirrored;
  }
  return config;
}

}  // namespace kitecc
