#pragma once

// Chart for convex configurations with perpendicular diagonals:
//     q1 = (1, 0), q2 = (0, a), q3 = (-b, 0), q4 = (0, -c),   a, b, c > 0.
// Kites are the planes b = 1 (symmetric about the y-axis) and a = c
// (symmetric about the x-axis); they meet along the rhombus line (a, 1, a).

#include <array>

#include "kitecc/cc_core.hpp"
#include "kitecc/geometry.hpp"

namespace kitecc {

struct KitePoint {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

PlanarConfig kite_positions(const KitePoint& k);
DistanceVector kite_distances(const KitePoint& k);

/// r13, r24 > r12 >= r14, r23 >= r34 (ordered labeling, r12 the longest side).
bool in_gamma(const KitePoint& k);

enum class KitePlane { B1, AC };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double x) const {
    return (lo_closed ? x >= lo : x > lo) && (hi_closed ? x <= hi : x < hi);
  }
  bool empty() const { return lo_closed && hi_closed ? lo > hi : lo >= hi; }
};

/// Admissible parameters on one kite plane. For B1 the free pair is (a, c),
/// for AC it is (a, b).
struct GammaBounds {
  KitePlane plane = KitePlane::B1;
  Interval a;
  /// Range of c (B1) or b (AC) at the given a.
  Interval second(double a) const;
};

GammaBounds gamma_domain_bounds(KitePlane plane);

/// The consistency relation in chart coordinates.
double F(const KitePoint& k, const PotentialParams& p);
double F_scale(const KitePoint& k, const PotentialParams& p);

/// (dF/da, dF/db, dF/dc) by the chain rule through the six distances.
std::array<double, 3> F_gradient(const KitePoint& k, const PotentialParams& p);

/// dF/db through the chain rule; valid everywhere.
double dF_db(const KitePoint& k, const PotentialParams& p);

/// dF/db simplified with F = 0 substituted: only meaningful on the zero set.
/// Throws NearSingular when r13^beta - r12^beta is below tolerance.
double dF_db_on_gamma(const KitePoint& k, const PotentialParams& p);

/// (1, m2, 1, m4) for the kite (a, 1, c).
Weights masses_kite_b1(double a, double c, const PotentialParams& p);
/// (1, m2, m3, m2) for the kite (a, b, a).
Weights masses_kite_ac(double a, double b, const PotentialParams& p);

/// 2 (a^2 - c^2)(b^2 - 1)(ac + b): the vortex relation in factored form.
double vortex_F_factored(double a, double b, double c);

/// F / ((a^2 - c^2)(b^2 - 1)) for alpha in {2, 4}. Throws Domain for other
/// alpha and NearSingular inside the guard band around either kite plane.
double residual_factor(const KitePoint& k, const PotentialParams& p);

/// Whether (a, b, c) lies outside the residual_factor guard band.
bool outside_guard_band(const KitePoint& k);

}  // namespace kitecc
