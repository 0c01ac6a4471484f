#pragma once

// Central-configuration equations in mutual-distance coordinates for
// power-law potentials U = sum m_i m_j / r_ij^alpha and for the point-vortex
// Hamiltonian H = -sum G_i G_j ln r_ij.
//
// The six pair equations are
//     m_i m_j (s_ij - lambda') = sigma A_i A_j,   s_ij = r_ij^(-beta),
// with beta = alpha + 2 (beta = 2 for vortices).

#include <array>

#include "kitecc/geometry.hpp"

namespace kitecc {

class PotentialParams {
 public:
  /// Power-law potential; throws Domain unless alpha > 0.
  static PotentialParams power_law(double alpha);
  static PotentialParams vortex();

  bool is_vortex() const { return vortex_; }
  /// Exponent of the power law; 0 for the vortex marker.
  double alpha() const { return alpha_; }
  double beta() const { return vortex_ ? 2.0 : alpha_ + 2.0; }

 private:
  PotentialParams(double alpha, bool vortex) : alpha_(alpha), vortex_(vortex) {}
  double alpha_;
  bool vortex_;
};

/// r^beta; exact repeated multiplication for small integer exponents.
double beta_power(double r, double beta);

struct CCResidual {
  PairValues per_pair{};
  double lambda_prime = 0.0;
  double sigma = 0.0;
  double norm = 0.0;
};

struct MultiplierFit {
  double lambda_prime = 0.0;
  double sigma = 0.0;
  double norm = 0.0;
};

using Weights = std::array<double, kBodies>;

/// U_alpha, or H for the vortex marker. Throws Singularity on coincident bodies.
double potential(const PlanarConfig& config, const PotentialParams& p);

/// sum m_i |q_i - c|^2 about the weighted center. Throws Domain if the total
/// weight vanishes.
double moment_of_inertia(const PlanarConfig& config);
/// (1/M) sum_{i<j} m_i m_j r_ij^2.
double moment_of_inertia(const DistanceVector& d, const Weights& weights);

PairValues s_values(const DistanceVector& d, const PotentialParams& p);

CCResidual cc_residuals(const PlanarConfig& config, double lambda_prime, double sigma,
                        const PotentialParams& p);
/// Distance form; `area_products` holds A_i A_j in pair order.
CCResidual cc_residuals(const DistanceVector& d, const PairValues& area_products,
                        const Weights& weights, double lambda_prime, double sigma,
                        const PotentialParams& p);

/// Least-squares (lambda', sigma) over all six pair equations.
/// Throws AmbiguousFit when the 6x2 system is rank deficient.
MultiplierFit fit_multipliers(const PlanarConfig& config, const PotentialParams& p);
MultiplierFit fit_multipliers(const DistanceVector& d, const PairValues& area_products,
                              const Weights& weights, const PotentialParams& p);

/// The two Dziobek differences
///   (s12-l)(s34-l) - (s13-l)(s24-l)  and  (s13-l)(s24-l) - (s14-l)(s23-l).
std::array<double, 2> dziobek_residuals(const DistanceVector& d, double lambda_prime,
                                        const PotentialParams& p);

/// lambda' solving the Dziobek relation, taken from the pairing of opposite
/// sides with the best-conditioned denominator.
double dziobek_lambda(const DistanceVector& d, const PotentialParams& p);

/// (r24^b - r14^b)(r13^b - r12^b)(r23^b - r34^b) - (r12^b - r14^b)(r24^b - r34^b)(r13^b - r23^b)
double consistency_F(const DistanceVector& d, const PotentialParams& p);

/// Magnitude of consistency_F's terms, r_max^(3 beta); F is homogeneous of that degree.
double consistency_scale(const DistanceVector& d, const PotentialParams& p);

inline constexpr double kConsistencyTol = 1e-9;

/// Masses normalized to m1 = 1 from ratios of the pair equations:
///   m2 from (13)/(23), m3 from (12)/(23), m4 from (12)/(14).
/// Throws InconsistentInput if d is not planar or violates the consistency
/// relation, DivisionByZero if some s_ij coincides with lambda'.
Weights recover_masses(const DistanceVector& d, const OrientedAreas& areas,
                       const PotentialParams& p);

/// Same ratios through the complementary equation pairs:
///   m3 from (14)/(34), m4 from (13)/(34), m2 from (12)/(13).
/// Agrees with recover_masses whenever the input is consistent.
Weights recover_masses_cross(const DistanceVector& d, const OrientedAreas& areas,
                             const PotentialParams& p);

}  // namespace kitecc
