#include "kitecc/kite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kitecc/error.hpp"

namespace kitecc {

namespace {

void require_positive(const KitePoint& k) {
  if (!(k.a > 0.0 && k.b > 0.0 && k.c > 0.0)) {
    throw Error(ErrorKind::Domain, "kite coordinates must be positive");
  }
}

struct BetaPowers {
  PairValues r{};
  PairValues x{};  // r^beta
};

BetaPowers powers(const KitePoint& k, const PotentialParams& p) {
  BetaPowers out;
  out.r = kite_distances(k).values();
  for (std::size_t i = 0; i < kPairs; ++i) out.x[i] = beta_power(out.r[i], p.beta());
  return out;
}

double relative_denominator(double den, double scale, const char* what) {
  if (!(std::abs(den) > 1e-12 * scale)) {
    throw Error(ErrorKind::DegenerateKite, std::string("vanishing denominator ") + what);
  }
  return den;
}

}  // namespace

PlanarConfig kite_positions(const KitePoint& k) {
  require_positive(k);
  PlanarConfig config;
  config.positions = {Point2{1.0, 0.0}, Point2{0.0, k.a}, Point2{-k.b, 0.0}, Point2{0.0, -k.c}};
  return config;
}

DistanceVector kite_distances(const KitePoint& k) {
  const double a = k.a, b = k.b, c = k.c;
  return DistanceVector(std::sqrt(a * a + 1.0), 1.0 + b, std::sqrt(1.0 + c * c),
                        std::sqrt(a * a + b * b), a + c, std::sqrt(b * b + c * c));
}

bool in_gamma(const KitePoint& k) {
  if (!(k.a > 0.0 && k.b > 0.0 && k.c > 0.0)) return false;
  const DistanceVector d = kite_distances(k);
  return d.r13() > d.r12() && d.r24() > d.r12() && d.r12() >= d.r14() && d.r12() >= d.r23() &&
         d.r14() >= d.r34() && d.r23() >= d.r34();
}

Interval GammaBounds::second(double a) const {
  Interval out;
  out.hi = plane == KitePlane::B1 ? a : 1.0;
  out.lo = std::sqrt(a * a + 1.0) - (plane == KitePlane::B1 ? a : 1.0);
  out.hi_closed = true;
  if (!this->a.contains(a)) {
    // Outside the a-range the slice is empty.
    out.lo = out.hi;
    out.hi_closed = false;
  }
  return out;
}

GammaBounds gamma_domain_bounds(KitePlane plane) {
  GammaBounds out;
  out.plane = plane;
  out.a = Interval{1.0 / std::sqrt(3.0), std::sqrt(3.0), false, false};
  return out;
}

double F(const KitePoint& k, const PotentialParams& p) {
  return consistency_F(kite_distances(k), p);
}

double F_scale(const KitePoint& k, const PotentialParams& p) {
  return consistency_scale(kite_distances(k), p);
}

std::array<double, 3> F_gradient(const KitePoint& k, const PotentialParams& p) {
  const BetaPowers bp = powers(k, p);
  const auto& r = bp.r;
  const auto& x = bp.x;
  const double beta = p.beta();
  const double pf = x[4] - x[2];  // X24 - X14
  const double qf = x[1] - x[0];  // X13 - X12
  const double rf = x[3] - x[5];  // X23 - X34
  const double sf = x[0] - x[2];  // X12 - X14
  const double tf = x[4] - x[5];  // X24 - X34
  const double wf = x[1] - x[3];  // X13 - X23

  PairValues dfdx{};
  dfdx[0] = -pf * rf - tf * wf;
  dfdx[1] = pf * rf - sf * tf;
  dfdx[2] = -qf * rf + tf * wf;
  dfdx[3] = pf * qf + sf * tf;
  dfdx[4] = qf * rf - sf * wf;
  dfdx[5] = -pf * qf + sf * wf;

  PairValues dfdr{};
  for (std::size_t i = 0; i < kPairs; ++i) dfdr[i] = dfdx[i] * beta * x[i] / r[i];

  const double a = k.a, b = k.b, c = k.c;
  const double grad_a = dfdr[0] * a / r[0] + dfdr[3] * a / r[3] + dfdr[4];
  const double grad_b = dfdr[1] + dfdr[3] * b / r[3] + dfdr[5] * b / r[5];
  const double grad_c = dfdr[2] * c / r[2] + dfdr[4] + dfdr[5] * c / r[5];
  return {grad_a, grad_b, grad_c};
}

double dF_db(const KitePoint& k, const PotentialParams& p) { return F_gradient(k, p)[1]; }

double dF_db_on_gamma(const KitePoint& k, const PotentialParams& p) {
  const BetaPowers bp = powers(k, p);
  const auto& r = bp.r;
  const auto& x = bp.x;
  const double beta = p.beta();
  const double alpha = beta - 2.0;
  const double b = k.b;
  const double x12 = x[0], x13 = x[1], x14 = x[2], x23 = x[3], x24 = x[4], x34 = x[5];
  const double gap = x13 - x12;
  if (!(std::abs(gap) > 1e-12 * x13)) {
    throw Error(ErrorKind::NearSingular, "r13^beta - r12^beta vanishes");
  }
  const double r13_bm1 = x13 / r[1];
  const double r23_alpha = beta_power(r[3], alpha);
  const double r34_alpha = beta_power(r[5], alpha);
  const double first = beta * r13_bm1 * (x12 - x14) * (x24 - x34) * (x12 - x23) / gap;
  const double second = b * beta * (x24 - x14) * gap * (r23_alpha - r34_alpha);
  const double third = b * beta * (x12 - x14) * (r34_alpha * (x13 - x23) + r23_alpha * (x24 - x34));
  return first + second + third;
}

Weights masses_kite_b1(double a, double c, const PotentialParams& p) {
  const KitePoint k{a, 1.0, c};
  require_positive(k);
  const PairValues s = s_values(kite_distances(k), p);
  const double scale = *std::max_element(s.begin(), s.end());
  const double s13 = s[1], s14 = s[2], s23 = s[3], s24 = s[4];
  const double m2 = 2.0 * c / (a + c) * (s14 - s13) / relative_denominator(s23 - s24, scale, "s23 - s24");
  const double m4 = 2.0 * a / (a + c) * (s23 - s13) / relative_denominator(s14 - s24, scale, "s14 - s24");
  return {1.0, m2, 1.0, m4};
}

Weights masses_kite_ac(double a, double b, const PotentialParams& p) {
  const KitePoint k{a, b, a};
  require_positive(k);
  const PairValues s = s_values(kite_distances(k), p);
  const double scale = *std::max_element(s.begin(), s.end());
  const double s13 = s[1], s14 = s[2], s23 = s[3], s24 = s[4];
  const double den_24 = relative_denominator(s23 - s24, scale, "s23 - s24");
  const double den_13 = relative_denominator(s23 - s13, scale, "s23 - s13");
  const double m2 = (b + 1.0) / (2.0 * b) * (s14 - s13) / den_24;
  const double m3 = (s14 - s13) * (s14 - s24) / (b * den_13 * den_24);
  return {1.0, m2, m3, m2};
}

double vortex_F_factored(double a, double b, double c) {
  return 2.0 * (a * a - c * c) * (b * b - 1.0) * (a * c + b);
}

bool outside_guard_band(const KitePoint& k) {
  const double m = std::max({1.0, k.a, k.b, k.c});
  const double band = 1e-4 * m * m;
  return std::abs(k.a * k.a - k.c * k.c) > band && std::abs(k.b * k.b - 1.0) > band;
}

double residual_factor(const KitePoint& k, const PotentialParams& p) {
  require_positive(k);
  if (p.is_vortex() || !(p.alpha() == 2.0 || p.alpha() == 4.0)) {
    throw Error(ErrorKind::Domain, "residual factor is defined for alpha in {2, 4}");
  }
  if (!outside_guard_band(k)) {
    throw Error(ErrorKind::NearSingular, "inside the guard band around a kite plane");
  }
  return F(k, p) / ((k.a * k.a - k.c * k.c) * (k.b * k.b - 1.0));
}

}  // namespace kitecc
