#include "kitecc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Dense>

#include "kitecc/error.hpp"

namespace kitecc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kBracketInset = 1e-9;
constexpr double kBracketOvershoot = 0.2;

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double b_slice_lower(double a) { return std::sqrt(a * a + 1.0) - 1.0; }

BBracket b_bracket(double a) {
  return {b_slice_lower(a) + kBracketInset, 1.0 + kBracketOvershoot};
}

bool slice_admissible(double a, double c) {
  if (!(a > 0.0 && c > 0.0 && a > c)) return false;
  const GammaBounds bounds = gamma_domain_bounds(KitePlane::B1);
  return bounds.second(a).contains(c) && b_slice_lower(a) < 1.0;
}

int count_sign_changes_b(double a, double c, const PotentialParams& p, double step) {
  const BBracket br = b_bracket(a);
  const auto n = static_cast<std::size_t>(std::ceil((br.hi - br.lo) / step));
  int changes = 0;
  double prev = sign_of(F({a, br.lo, c}, p));
  for (std::size_t i = 1; i <= n; ++i) {
    const double b = std::min(br.hi, br.lo + static_cast<double>(i) * step);
    const double s = sign_of(F({a, b, c}, p));
    if (s == 0.0) continue;
    if (prev != 0.0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

double find_root_b(double a, double c, const PotentialParams& p, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::Domain, "tolerance must be positive");
  if (!(a > 0.0 && c > 0.0)) throw Error(ErrorKind::Domain, "a and c must be positive");
  if (std::abs(a - c) <= 4.0 * kEps * a) {
    throw Error(ErrorKind::IllPosedSlice, "F vanishes for every b on the plane a = c");
  }
  if (!slice_admissible(a, c)) {
    throw Error(ErrorKind::Bracket, "slice (a, c) does not meet the admissible region with a > c");
  }

  const BBracket br = b_bracket(a);
  auto f = [&](double b) { return F({a, b, c}, p); };

  // Coarse sweep to isolate the first sign change.
  constexpr double sweep = 1e-3;
  double lo = br.lo;
  double f_lo = f(lo);
  double hi = lo;
  double f_hi = f_lo;
  bool found = f_lo == 0.0;
  while (!found && hi < br.hi) {
    lo = hi;
    f_lo = f_hi;
    hi = std::min(br.hi, hi + sweep);
    f_hi = f(hi);
    found = sign_of(f_lo) * sign_of(f_hi) <= 0.0;
  }
  if (!found) throw Error(ErrorKind::Bracket, "F does not change sign on the admissible slice");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;

  const double xtol_floor = 1e-3 * tol;
  double b = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fb = f(b);
    if (fb == 0.0) return b;
    if (sign_of(fb) == sign_of(f_lo)) {
      lo = b;
      f_lo = fb;
    } else {
      hi = b;
      f_hi = fb;
    }
    const double slope = dF_db({a, b, c}, p);
    double next = slope != 0.0 ? b - fb / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - b);
    b = next;
    const double xtol = std::max(xtol_floor, 2.0 * kEps * std::abs(b));
    if (step <= xtol || hi - lo <= xtol) return b;
  }
  return b;
}

double grid_node(const Range& r, std::size_t n, std::size_t k) {
  return r.lo + (static_cast<double>(k) + 0.5) * (r.hi - r.lo) / static_cast<double>(n);
}

Range default_a_range() { return {1.0 / std::sqrt(3.0), std::sqrt(3.0)}; }
Range default_c_range() { return {2.0 - std::sqrt(3.0), std::sqrt(3.0)}; }

namespace {

ScanCell scan_cell(double a, double c, const PotentialParams& p, double tol) {
  ScanCell cell;
  cell.a = a;
  cell.c = c;
  try {
    cell.sign_changes = count_sign_changes_b(a, c, p);
    cell.b_root = find_root_b(a, c, p, tol);
    cell.deviation = std::abs(cell.b_root - 1.0);
    const KitePoint at_root{a, cell.b_root, c};
    cell.dfdb = dF_db(at_root, p);
    cell.dfdb_gamma = dF_db_on_gamma(at_root, p);
    cell.monotone = cell.dfdb > 0.0 && cell.dfdb_gamma > 0.0;
    cell.ok = true;
  } catch (const Error& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

ScanReport scan_gamma(const Range& a_range, const Range& c_range, std::size_t resolution,
                      const PotentialParams& p, double tol, unsigned threads) {
  if (resolution < 2) throw Error(ErrorKind::Domain, "resolution must be at least 2");
  ScanReport report;
  report.a_range = a_range;
  report.c_range = c_range;
  report.resolution = resolution;
  report.tol = tol;

  for (std::size_t ia = 0; ia < resolution; ++ia) {
    for (std::size_t ic = 0; ic < resolution; ++ic) {
      const double a = grid_node(a_range, resolution, ia);
      const double c = grid_node(c_range, resolution, ic);
      if (!slice_admissible(a, c)) continue;
      ScanCell cell;
      cell.ia = ia;
      cell.ic = ic;
      cell.a = a;
      cell.c = c;
      report.cells.push_back(cell);
    }
  }

  const std::size_t n = report.cells.size();
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          ScanCell& cell = report.cells[i];
          const std::size_t ia = cell.ia, ic = cell.ic;
          cell = scan_cell(cell.a, cell.c, p, tol);
          cell.ia = ia;
          cell.ic = ic;
        }
      });
    }
  }

  for (const ScanCell& cell : report.cells) {
    if (!cell.ok) {
      ++report.failed;
      continue;
    }
    report.max_deviation = std::max(report.max_deviation, cell.deviation);
    report.all_monotone = report.all_monotone && cell.monotone;
    report.all_single_crossing = report.all_single_crossing && cell.sign_changes == 1;
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

struct SystemScales {
  double r_ref = 1.0;
  double eq = 1.0;        // pair-equation magnitude
  double lambda = 1.0;    // lambda' magnitude
  double sigma = 1.0;     // sigma magnitude
  double v = 1.0;         // r_ref^8
};

double total_mass(const Weights& m) { return m[0] + m[1] + m[2] + m[3]; }

PairValues mass_products(const Weights& m) {
  PairValues out{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    out[k] = m[i] * m[j];
  }
  return out;
}

SystemScales system_scales(const Weights& m, const PotentialParams& p, double i0) {
  const PairValues mm = mass_products(m);
  double sum_mm = 0.0, max_mm = 0.0;
  for (double v : mm) {
    sum_mm += v;
    max_mm = std::max(max_mm, std::abs(v));
  }
  SystemScales sc;
  sc.r_ref = std::sqrt(i0 * total_mass(m) / sum_mm);
  sc.lambda = std::pow(sc.r_ref, -p.beta());
  sc.eq = max_mm * sc.lambda;
  sc.sigma = sc.eq / std::pow(sc.r_ref, 4);
  sc.v = std::pow(sc.r_ref, 8);
  return sc;
}

Vec8 residual_vector(const DistanceVector& d, double lambda_prime, double sigma, const Weights& m,
                     const PotentialParams& p, double i0, const SystemScales& sc) {
  const PairValues s = s_values(d, p);
  const PairValues mm = mass_products(m);
  const PairValues g = cayley_menger_gradient_unchecked(d);
  Vec8 e;
  for (std::size_t k = 0; k < kPairs; ++k) {
    e(static_cast<int>(k)) = (mm[k] * (s[k] - lambda_prime) + sigma * g[k] / 32.0) / sc.eq;
  }
  e(6) = (moment_of_inertia(d, m) - i0) / i0;
  e(7) = cayley_menger(d) / sc.v;
  return e;
}

// Jacobian with respect to the scaled unknowns (r / r_ref, lambda' / lambda_ref, sigma / sigma_ref).
Mat8 jacobian(const DistanceVector& d, double sigma, const Weights& m, const PotentialParams& p,
              double i0, const SystemScales& sc) {
  const PairValues mm = mass_products(m);
  const PairValues g = cayley_menger_gradient_unchecked(d);
  const auto h = cayley_menger_hessian(d);
  const double beta = p.beta();
  const double total = total_mass(m);
  Mat8 j = Mat8::Zero();
  for (std::size_t k = 0; k < kPairs; ++k) {
    const int row = static_cast<int>(k);
    for (std::size_t l = 0; l < kPairs; ++l) {
      double v = sigma / 32.0 * h[k][l] * 2.0 * d[l];
      if (k == l) v += -beta * mm[k] / beta_power(d[k], beta) / d[k];
      j(row, static_cast<int>(l)) = v / sc.eq * sc.r_ref;
    }
    j(row, 6) = -mm[k] / sc.eq * sc.lambda;
    j(row, 7) = g[k] / 32.0 / sc.eq * sc.sigma;
  }
  for (std::size_t l = 0; l < kPairs; ++l) {
    const int col = static_cast<int>(l);
    j(6, col) = 2.0 * mm[l] * d[l] / total / i0 * sc.r_ref;
    j(7, col) = g[l] * 2.0 * d[l] / sc.v * sc.r_ref;
  }
  return j;
}

DistanceVector rescaled_to_inertia(const DistanceVector& d, const Weights& m, double i0) {
  const double inertia = moment_of_inertia(d, m);
  if (!(inertia > 0.0)) throw Error(ErrorKind::Domain, "initial moment of inertia is not positive");
  return d.scaled(std::sqrt(i0 / inertia));
}

}  // namespace

std::array<double, 8> newton_residual(const DistanceVector& d, double lambda_prime, double sigma,
                                      const Weights& masses, const PotentialParams& p, double i0) {
  const SystemScales sc = system_scales(masses, p, i0);
  const Vec8 e = residual_vector(d, lambda_prime, sigma, masses, p, i0, sc);
  std::array<double, 8> out{};
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = e(i);
  return out;
}

NewtonResult newton_cc(const Weights& masses, const PotentialParams& p, const DistanceVector& init,
                       double i0, const NewtonOptions& options) {
  if (!(i0 > 0.0)) throw Error(ErrorKind::Domain, "I0 must be positive");
  if (!p.is_vortex()) {
    for (double m : masses) {
      if (!(m > 0.0)) throw Error(ErrorKind::Domain, "masses must be positive");
    }
  }
  if (!init.all_positive()) throw Error(ErrorKind::Domain, "initial distances must be positive");

  const SystemScales sc = system_scales(masses, p, i0);
  NewtonResult result;
  DistanceVector d = rescaled_to_inertia(init, masses, i0);

  // Starting multipliers from a least-squares fit at the initial guess.
  double lambda_prime = sc.lambda;
  double sigma = 0.0;
  {
    PairValues area_products = cayley_menger_gradient_unchecked(d);
    for (auto& v : area_products) v /= -32.0;
    try {
      const MultiplierFit fit = fit_multipliers(d, area_products, masses, p);
      lambda_prime = fit.lambda_prime;
      sigma = fit.sigma;
    } catch (const Error&) {
      const PairValues s = s_values(d, p);
      lambda_prime = 0.0;
      for (double v : s) lambda_prime += v / 6.0;
    }
  }

  Vec8 e = residual_vector(d, lambda_prime, sigma, masses, p, i0, sc);
  double norm = e.norm();
  bool perturbed = false;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    if (norm <= options.tol) break;

    const Mat8 j = jacobian(d, sigma, masses, p, i0, sc);
    Eigen::FullPivLU<Mat8> lu(j);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
      if (iter == 0 && !perturbed) {
        // Symmetric strata can make the system rank deficient at the start.
        perturbed = true;
        for (std::size_t k = 0; k < kPairs; ++k) d[k] *= 1.0 + ((k % 2 == 0) ? 1e-8 : -1e-8);
        result.warnings.push_back("singular Jacobian at the initial guess; perturbed by 1e-8");
        e = residual_vector(d, lambda_prime, sigma, masses, p, i0, sc);
        norm = e.norm();
        --iter;
        continue;
      }
      throw Error(ErrorKind::Decomposition,
                  "singular Jacobian at iteration " + std::to_string(iter) +
                      " (residual " + std::to_string(norm) + ")");
    }
    const Vec8 step = lu.solve(-e);

    double t = 1.0;
    bool accepted = false;
    DistanceVector trial_d;
    double trial_lambda = 0.0, trial_sigma = 0.0, trial_norm = 0.0;
    Vec8 trial_e;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      bool positive = true;
      for (std::size_t k = 0; k < kPairs; ++k) {
        trial_d[k] = d[k] + t * step(static_cast<int>(k)) * sc.r_ref;
        positive = positive && trial_d[k] > 0.0;
      }
      if (!positive) continue;
      trial_lambda = lambda_prime + t * step(6) * sc.lambda;
      trial_sigma = sigma + t * step(7) * sc.sigma;
      trial_e = residual_vector(trial_d, trial_lambda, trial_sigma, masses, p, i0, sc);
      trial_norm = trial_e.norm();
      if (trial_norm < norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Stalled at the rounding floor counts as converged only when the
      // residual is already tiny; otherwise the iteration has failed.
      if (norm <= 1e3 * options.tol) break;
      throw Error(ErrorKind::Divergence,
                  "no descent step at iteration " + std::to_string(iter) + ", residual " +
                      std::to_string(norm));
    }
    d = trial_d;
    lambda_prime = trial_lambda;
    sigma = trial_sigma;
    e = trial_e;
    norm = trial_norm;
    result.iterations = iter + 1;
  }

  if (!(norm <= 1e3 * options.tol)) {
    throw Error(ErrorKind::Divergence,
                "not converged after " + std::to_string(options.max_iterations) +
                    " iterations, residual " + std::to_string(norm));
  }
  result.distances = d;
  result.lambda_prime = lambda_prime;
  result.sigma = sigma;
  result.residual_norm = norm;
  return result;
}

CCVerdict verify_cc(const DistanceVector& d, const Weights& masses, const PotentialParams& p,
                    double tol) {
  CCVerdict v;
  if (!d.all_positive()) return v;
  v.realizable = is_realizable_planar(d);
  if (const auto config = realize_planar(d)) v.convex = convexity_order_check(*config);
  const double r_side = std::max({d.r12(), d.r14(), d.r23(), d.r34()});
  v.diagonals_dominate = d.r13() > r_side && d.r24() > r_side;
  v.consistency = std::abs(consistency_F(d, p)) / consistency_scale(d, p);
  v.masses_positive = std::all_of(masses.begin(), masses.end(), [](double m) { return m > 0.0; });

  PairValues area_products = cayley_menger_gradient_unchecked(d);
  for (auto& x : area_products) x /= -32.0;
  const PairValues s = s_values(d, p);
  double scale = 0.0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    scale = std::max(scale, std::abs(masses[i] * masses[j] * s[k]));
  }
  try {
    const MultiplierFit fit = fit_multipliers(d, area_products, masses, p);
    v.lambda_prime = fit.lambda_prime;
    v.sigma = fit.sigma;
    v.cc_norm = scale > 0.0 ? fit.norm / scale : fit.norm;
  } catch (const Error&) {
    v.cc_norm = std::numeric_limits<double>::infinity();
  }
  v.cc_ok = v.cc_norm < tol;
  return v;
}

}  // namespace kitecc
