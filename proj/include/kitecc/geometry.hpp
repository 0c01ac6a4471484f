#pragma once

// Distance geometry of four planar points: mutual distances, the
// Cayley-Menger determinant and its gradient, oriented areas and the
// realizability / convexity predicates used by the rest of the toolkit.

#include <array>
#include <cstddef>
#include <optional>
#include <utility>

namespace kitecc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr std::size_t kBodies = 4;
inline constexpr std::size_t kPairs = 6;

/// Pair index order used everywhere: 12, 13, 14, 23, 24, 34 (1-based bodies).
inline constexpr std::array<std::pair<int, int>, kPairs> kPairBodies{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Position of pair (i, j) in the fixed order; bodies are 0-based, i != j.
constexpr std::size_t pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  // 0-based (i, j) -> 0..5 following 01, 02, 03, 12, 13, 23
  return i == 0 ? static_cast<std::size_t>(j - 1) : static_cast<std::size_t>(i + j);
}

using PairValues = std::array<double, kPairs>;

/// Four labeled positions plus their weights (masses, or circulations for vortices).
struct PlanarConfig {
  std::array<Point2, kBodies> positions{};
  std::array<double, kBodies> weights{1.0, 1.0, 1.0, 1.0};
};

/// The six mutual distances in the order r12, r13, r14, r23, r24, r34.
class DistanceVector {
 public:
  DistanceVector() = default;
  explicit DistanceVector(const PairValues& r) : r_(r) {}
  DistanceVector(double r12, double r13, double r14, double r23, double r24, double r34)
      : r_{r12, r13, r14, r23, r24, r34} {}

  double operator[](std::size_t k) const { return r_[k]; }
  double& operator[](std::size_t k) { return r_[k]; }
  /// Distance between bodies i and j (0-based).
  double between(int i, int j) const { return r_[pair_index(i, j)]; }

  double r12() const { return r_[0]; }
  double r13() const { return r_[1]; }
  double r14() const { return r_[2]; }
  double r23() const { return r_[3]; }
  double r24() const { return r_[4]; }
  double r34() const { return r_[5]; }

  const PairValues& values() const { return r_; }
  double max() const;
  bool all_positive() const;
  /// Strict triangle inequality on each of the four triangles.
  bool satisfies_triangle_inequalities() const;

  DistanceVector scaled(double t) const;

 private:
  PairValues r_{};
};

/// A_i is the signed area of the triangle formed by every body except i.
/// For a counterclockwise convex quadrilateral A1, A3 > 0 and A2, A4 < 0.
struct OrientedAreas {
  std::array<double, kBodies> a{};

  double operator[](std::size_t i) const { return a[i]; }
  /// A_i * A_j for each pair in the fixed order.
  PairValues pair_products() const;
};

DistanceVector mutual_distances(const PlanarConfig& config);

/// The bordered 5x5 Cayley-Menger determinant in squared distances.
double cayley_menger(const DistanceVector& d);

/// Default relative planarity tolerance; compared against |V| / max(1, r_max^8).
inline constexpr double kPlanarityTol = 1e-9;

double planarity_scale(const DistanceVector& d);

/// dV/d(r_ij^2) from cofactors of the determinant. Throws FormulaInapplicable
/// unless |V| <= tol * planarity_scale(d).
PairValues cayley_menger_gradient(const DistanceVector& d, double tol = kPlanarityTol);

/// Same derivative without the planarity precondition (used by the solver,
/// which iterates through non-planar points).
PairValues cayley_menger_gradient_unchecked(const DistanceVector& d);

/// d^2 V / d(r_ij^2) d(r_kl^2) for all pairs, row-major 6x6.
std::array<PairValues, kPairs> cayley_menger_hessian(const DistanceVector& d);

/// Cross-check path: -32 A_i A_j from a planar realization.
PairValues cayley_menger_gradient_from_areas(const OrientedAreas& areas);

OrientedAreas oriented_areas(const PlanarConfig& config);

bool is_realizable_planar(const DistanceVector& d, double tol = kPlanarityTol);

/// True iff the bodies are in strictly convex counterclockwise position in
/// index order 1, 2, 3, 4.
bool convexity_order_check(const PlanarConfig& config);

/// Embeds planar-realizable distances: body 1 at the origin, body 2 on the
/// positive x-axis, body 3 in the upper half plane. Returns nullopt when the
/// distances do not close up within tolerance. If the embedding is convex in
/// the reversed orientation it is reflected so that index order is CCW.
std::optional<PlanarConfig> realize_planar(const DistanceVector& d, double tol = 1e-7);

}  // namespace kitecc
