#include "kitecc/cc_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "kitecc/error.hpp"

namespace kitecc {

namespace {

double weight_sum(const Weights& w) { return w[0] + w[1] + w[2] + w[3]; }

PairValues weight_products(const Weights& w) {
  PairValues out{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    out[k] = w[i] * w[j];
  }
  return out;
}

double checked_ratio(double num, double den, double scale, const char* what) {
  if (!(std::abs(den) > 1e-12 * scale)) {
    throw Error(ErrorKind::DivisionByZero, std::string("vanishing denominator in ") + what);
  }
  return num / den;
}

}  // namespace

PotentialParams PotentialParams::power_law(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::Domain, "alpha must be positive, got " + std::to_string(alpha));
  }
  return PotentialParams(alpha, false);
}

PotentialParams PotentialParams::vortex() { return PotentialParams(0.0, true); }

double beta_power(double r, double beta) {
  const double rounded = std::round(beta);
  if (rounded == beta && rounded >= 0.0 && rounded <= 16.0) {
    double out = 1.0;
    for (int k = 0; k < static_cast<int>(rounded); ++k) out *= r;
    return out;
  }
  return std::pow(r, beta);
}

double potential(const PlanarConfig& config, const PotentialParams& p) {
  DistanceVector d;
  try {
    d = mutual_distances(config);
  } catch (const Error&) {
    throw Error(ErrorKind::Singularity, "potential is singular at coincident bodies");
  }
  const PairValues mm = weight_products(config.weights);
  double sum = 0.0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    sum += p.is_vortex() ? -mm[k] * std::log(d[k]) : mm[k] / std::pow(d[k], p.alpha());
  }
  return sum;
}

double moment_of_inertia(const PlanarConfig& config) {
  const Weights& m = config.weights;
  const double total = weight_sum(m);
  if (total == 0.0) throw Error(ErrorKind::Domain, "total weight is zero");
  Point2 center;
  for (std::size_t i = 0; i < kBodies; ++i) {
    center.x += m[i] * config.positions[i].x;
    center.y += m[i] * config.positions[i].y;
  }
  center.x /= total;
  center.y /= total;
  double inertia = 0.0;
  for (std::size_t i = 0; i < kBodies; ++i) {
    const double dx = config.positions[i].x - center.x;
    const double dy = config.positions[i].y - center.y;
    inertia += m[i] * (dx * dx + dy * dy);
  }
  return inertia;
}

double moment_of_inertia(const DistanceVector& d, const Weights& weights) {
  const double total = weight_sum(weights);
  if (total == 0.0) throw Error(ErrorKind::Domain, "total weight is zero");
  const PairValues mm = weight_products(weights);
  double sum = 0.0;
  for (std::size_t k = 0; k < kPairs; ++k) sum += mm[k] * d[k] * d[k];
  return sum / total;
}

PairValues s_values(const DistanceVector& d, const PotentialParams& p) {
  PairValues s{};
  for (std::size_t k = 0; k < kPairs; ++k) s[k] = 1.0 / beta_power(d[k], p.beta());
  return s;
}

CCResidual cc_residuals(const DistanceVector& d, const PairValues& area_products,
                        const Weights& weights, double lambda_prime, double sigma,
                        const PotentialParams& p) {
  const PairValues s = s_values(d, p);
  const PairValues mm = weight_products(weights);
  CCResidual out;
  out.lambda_prime = lambda_prime;
  out.sigma = sigma;
  double sq = 0.0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    out.per_pair[k] = mm[k] * (s[k] - lambda_prime) - sigma * area_products[k];
    sq += out.per_pair[k] * out.per_pair[k];
  }
  out.norm = std::sqrt(sq);
  return out;
}

CCResidual cc_residuals(const PlanarConfig& config, double lambda_prime, double sigma,
                        const PotentialParams& p) {
  return cc_residuals(mutual_distances(config), oriented_areas(config).pair_products(),
                      config.weights, lambda_prime, sigma, p);
}

MultiplierFit fit_multipliers(const DistanceVector& d, const PairValues& area_products,
                              const Weights& weights, const PotentialParams& p) {
  const PairValues s = s_values(d, p);
  const PairValues mm = weight_products(weights);
  Eigen::Matrix<double, 6, 2> x;
  Eigen::Matrix<double, 6, 1> y;
  for (std::size_t k = 0; k < kPairs; ++k) {
    const int row = static_cast<int>(k);
    x(row, 0) = mm[k];
    x(row, 1) = area_products[k];
    y(row) = mm[k] * s[k];
  }
  // Equilibrate columns so the rank decision is scale free.
  Eigen::Vector2d col_norm(x.col(0).norm(), x.col(1).norm());
  if (!(col_norm(0) > 0.0) || !(col_norm(1) > 0.0)) {
    throw Error(ErrorKind::AmbiguousFit, "a column of the multiplier system vanishes");
  }
  x.col(0) /= col_norm(0);
  x.col(1) /= col_norm(1);
  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, 2>> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < 2) {
    throw Error(ErrorKind::AmbiguousFit, "weight and area products are proportional");
  }
  const Eigen::Vector2d theta = qr.solve(y);
  MultiplierFit fit;
  fit.lambda_prime = theta(0) / col_norm(0);
  fit.sigma = theta(1) / col_norm(1);
  fit.norm = cc_residuals(d, area_products, weights, fit.lambda_prime, fit.sigma, p).norm;
  return fit;
}

MultiplierFit fit_multipliers(const PlanarConfig& config, const PotentialParams& p) {
  return fit_multipliers(mutual_distances(config), oriented_areas(config).pair_products(),
                         config.weights, p);
}

std::array<double, 2> dziobek_residuals(const DistanceVector& d, double lambda_prime,
                                        const PotentialParams& p) {
  const PairValues s = s_values(d, p);
  const double l = lambda_prime;
  const double p1234 = (s[0] - l) * (s[5] - l);
  const double p1324 = (s[1] - l) * (s[4] - l);
  const double p1423 = (s[2] - l) * (s[3] - l);
  return {p1234 - p1324, p1324 - p1423};
}

double dziobek_lambda(const DistanceVector& d, const PotentialParams& p) {
  const PairValues s = s_values(d, p);
  // (s_a - l)(s_b - l) = s_a s_b - l (s_a + s_b) for each pair of opposite edges.
  const std::array<std::array<std::size_t, 2>, 3> opposite{{{0, 5}, {1, 4}, {2, 3}}};
  double best_den = 0.0;
  double best_num = 0.0;
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t v = u + 1; v < 3; ++v) {
      const auto [a, b] = opposite[u];
      const auto [c, e] = opposite[v];
      const double den = (s[a] + s[b]) - (s[c] + s[e]);
      if (std::abs(den) > std::abs(best_den)) {
        best_den = den;
        best_num = s[a] * s[b] - s[c] * s[e];
      }
    }
  }
  const double s_scale = *std::max_element(s.begin(), s.end());
  return checked_ratio(best_num, best_den, s_scale, "Dziobek elimination of lambda'");
}

double consistency_F(const DistanceVector& d, const PotentialParams& p) {
  const double b = p.beta();
  const double x12 = beta_power(d.r12(), b), x13 = beta_power(d.r13(), b);
  const double x14 = beta_power(d.r14(), b), x23 = beta_power(d.r23(), b);
  const double x24 = beta_power(d.r24(), b), x34 = beta_power(d.r34(), b);
  return (x24 - x14) * (x13 - x12) * (x23 - x34) - (x12 - x14) * (x24 - x34) * (x13 - x23);
}

double consistency_scale(const DistanceVector& d, const PotentialParams& p) {
  return beta_power(d.max(), 3.0 * p.beta());
}

namespace {

struct MassInputs {
  PairValues shifted{};  // s_ij - lambda'
  double s_scale = 0.0;
  double area_scale = 0.0;
};

MassInputs prepare_mass_recovery(const DistanceVector& d, const OrientedAreas& areas,
                                 const PotentialParams& p) {
  if (std::abs(cayley_menger(d)) > kPlanarityTol * planarity_scale(d)) {
    throw Error(ErrorKind::InconsistentInput, "distances are not planar");
  }
  if (std::abs(consistency_F(d, p)) > kConsistencyTol * consistency_scale(d, p)) {
    throw Error(ErrorKind::InconsistentInput, "consistency relation violated");
  }
  const PairValues s = s_values(d, p);
  const double lambda = dziobek_lambda(d, p);
  MassInputs in;
  for (std::size_t k = 0; k < kPairs; ++k) in.shifted[k] = s[k] - lambda;
  in.s_scale = std::max(*std::max_element(s.begin(), s.end()), std::abs(lambda));
  for (double a : areas.a) in.area_scale = std::max(in.area_scale, std::abs(a));
  return in;
}

}  // namespace

Weights recover_masses(const DistanceVector& d, const OrientedAreas& areas,
                       const PotentialParams& p) {
  const MassInputs in = prepare_mass_recovery(d, areas, p);
  const auto& t = in.shifted;
  const double a1 = areas[0], a2 = areas[1], a3 = areas[2], a4 = areas[3];
  const double as = in.area_scale * in.s_scale;
  // (13)/(23): m2 = (s13-l) A2 / ((s23-l) A1)
  const double m2 = checked_ratio(t[1] * a2, t[3] * a1, as, "m2 from (13)/(23)");
  // (12)/(23): m3 = (s12-l) A3 / ((s23-l) A1)
  const double m3 = checked_ratio(t[0] * a3, t[3] * a1, as, "m3 from (12)/(23)");
  // (12)/(14): m4 = m2 (s12-l) A4 / ((s14-l) A2)
  const double m4 = m2 * checked_ratio(t[0] * a4, t[2] * a2, as, "m4 from (12)/(14)");
  return {1.0, m2, m3, m4};
}

Weights recover_masses_cross(const DistanceVector& d, const OrientedAreas& areas,
                             const PotentialParams& p) {
  const MassInputs in = prepare_mass_recovery(d, areas, p);
  const auto& t = in.shifted;
  const double a1 = areas[0], a2 = areas[1], a3 = areas[2], a4 = areas[3];
  const double as = in.area_scale * in.s_scale;
  const double m3 = checked_ratio(t[2] * a3, t[5] * a1, as, "m3 from (14)/(34)");
  const double m4 = checked_ratio(t[1] * a4, t[5] * a1, as, "m4 from (13)/(34)");
  const double m2 = m3 * checked_ratio(t[1] * a2, t[0] * a3, as, "m2 from (12)/(13)");
  return {1.0, m2, m3, m4};
}

}  // namespace kitecc
