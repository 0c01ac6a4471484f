#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kitecc/cc_core.hpp"
#include "kitecc/geometry.hpp"
#include "kitecc/kite.hpp"

namespace kitecc {

// ---------------------------------------------------------------------------
// Perpendicular-diagonal root search: with a > c fixed, find the b where F
// changes sign on the admissible slice. Every such root should be b = 1.
// ---------------------------------------------------------------------------

/// Lower end of the admissible b-slice (r13 > r12), exclusive.
double b_slice_lower(double a);

/// Bracket used by find_root_b: [b_slice_lower(a) + 1e-9, 1.2].
struct BBracket {
  double lo = 0.0;
  double hi = 0.0;
};
BBracket b_bracket(double a);

/// Whether the (a, c) slice meets the inequality region with a > c.
bool slice_admissible(double a, double c);

/// Sign changes of F(a, ., c) sampled at `step` across the bracket.
int count_sign_changes_b(double a, double c, const PotentialParams& p, double step = 1e-3);

/// Safeguarded Newton on F(a, ., c). Iterates until the Newton step or the
/// bracket width drops below max(1e-3 tol, 2 eps b).
/// Throws IllPosedSlice if a == c and Bracket if the slice has no sign change.
double find_root_b(double a, double c, const PotentialParams& p, double tol = 1e-9);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct ScanCell {
  std::size_t ia = 0;
  std::size_t ic = 0;
  double a = 0.0;
  double c = 0.0;
  bool ok = false;
  double b_root = 0.0;
  double deviation = 0.0;  // |b_root - 1|
  double dfdb = 0.0;        // chain-rule path at the root
  double dfdb_gamma = 0.0;  // simplified on-zero-set path at the root
  bool monotone = false;    // both derivative paths positive
  int sign_changes = 0;
  std::string error;
};

struct ScanReport {
  Range a_range;
  Range c_range;
  std::size_t resolution = 0;
  double tol = 0.0;
  /// Admissible cells only (a > c inside the inequality region), ordered by (ia, ic).
  std::vector<ScanCell> cells;
  std::size_t failed = 0;
  double max_deviation = 0.0;
  bool all_monotone = true;
  bool all_single_crossing = true;

  bool passed() const { return failed == 0 && max_deviation < tol; }
};

/// Node k of a resolution-n grid over [lo, hi] sits at the cell midpoint.
double grid_node(const Range& r, std::size_t n, std::size_t k);

/// Default (a, c) ranges covering the b = 1 plane domain.
Range default_a_range();
Range default_c_range();

/// Cells are independent; `threads` = 0 uses the hardware concurrency. The
/// report is identical for any thread count.
ScanReport scan_gamma(const Range& a_range, const Range& c_range, std::size_t resolution,
                      const PotentialParams& p, double tol = 1e-9, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Newton solver for the constrained critical-point system in distances.
// Unknowns (r12..r34, lambda', sigma); equations: the six pair equations with
// A_i A_j = -(1/32) dV/d(r_ij^2), I = I0, V = 0.
// ---------------------------------------------------------------------------

struct NewtonOptions {
  int max_iterations = 60;
  double tol = 1e-12;
};

struct NewtonResult {
  DistanceVector distances;
  double lambda_prime = 0.0;
  double sigma = 0.0;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<std::string> warnings;
};

/// Scaled residual of the eight equations (dimensionless).
std::array<double, 8> newton_residual(const DistanceVector& d, double lambda_prime, double sigma,
                                      const Weights& masses, const PotentialParams& p, double i0);

/// The init distances are first rescaled so that I = I0.
/// Throws Decomposition on a singular Jacobian and Divergence when the
/// residual cannot be driven below tolerance.
NewtonResult newton_cc(const Weights& masses, const PotentialParams& p, const DistanceVector& init,
                       double i0, const NewtonOptions& options = {});

struct CCVerdict {
  bool realizable = false;
  bool convex = false;
  bool diagonals_dominate = false;  // r13, r24 longer than every side
  double cc_norm = 0.0;              // fitted residual / largest m_i m_j s_ij
  bool cc_ok = false;
  double lambda_prime = 0.0;
  double sigma = 0.0;
  double consistency = 0.0;          // |F| / r_max^(3 beta)
  bool masses_positive = false;

  /// Gravitational verdicts require positive masses; vortex ones do not.
  bool passed(bool require_positive_masses = true) const {
    return realizable && convex && cc_ok && (masses_positive || !require_positive_masses);
  }
};

CCVerdict verify_cc(const DistanceVector& d, const Weights& masses, const PotentialParams& p,
                    double tol = 1e-10);

}  // namespace kitecc
