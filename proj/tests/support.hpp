#pragma once

// Test-only helpers: seeded generators and finite-difference oracles that are
// independent of the library's analytic paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "kitecc/geometry.hpp"
#include "kitecc/kite.hpp"

namespace kitecc::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  PlanarConfig random_config(double spread = 2.0) {
    PlanarConfig c;
    for (auto& p : c.positions) p = {uniform(-spread, spread), uniform(-spread, spread)};
    for (auto& m : c.weights) m = uniform(0.2, 3.0);
    return c;
  }

  /// Random convex quadrilateral in CCW order: four sorted angles on a
  /// jittered ellipse-like curve.
  PlanarConfig random_convex_config() {
    std::array<double, 4> angles{};
    for (;;) {
      for (auto& t : angles) t = uniform(0.0, 2.0 * M_PI);
      std::sort(angles.begin(), angles.end());
      bool spread = true;
      for (int i = 0; i < 4; ++i) {
        const double gap = i < 3 ? angles[i + 1] - angles[i] : angles[0] + 2.0 * M_PI - angles[3];
        spread = spread && gap > 0.3;
      }
      if (spread) break;
    }
    PlanarConfig c;
    const double sx = uniform(0.5, 2.0), sy = uniform(0.5, 2.0);
    const double ox = uniform(-1.0, 1.0), oy = uniform(-1.0, 1.0);
    for (int i = 0; i < 4; ++i) {
      c.positions[i] = {ox + sx * std::cos(angles[i]), oy + sy * std::sin(angles[i])};
    }
    return c;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline PlanarConfig unit_diamond() {
  PlanarConfig c;
  c.positions = {Point2{1, 0}, Point2{0, 1}, Point2{-1, 0}, Point2{0, -1}};
  return c;
}

/// Laplace expansion along the first row; leading n x n block of m.
inline double naive_det(std::array<std::array<double, 5>, 5> m, int n = 5);

inline double naive_cayley_menger(const PairValues& squared) {
  std::array<std::array<double, 5>, 5> m{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m[i][j] = (i == j) ? 0.0 : 1.0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    const auto [i, j] = kPairBodies[k];
    m[i + 1][j + 1] = squared[k];
    m[j + 1][i + 1] = squared[k];
  }
  return naive_det(m);
}

double naive_det(std::array<std::array<double, 5>, 5> m, int n) {
  if (n == 1) return m[0][0];
  double sum = 0.0;
  for (int col = 0; col < n; ++col) {
    std::array<std::array<double, 5>, 5> sub{};
    for (int i = 1; i < n; ++i) {
      int cj = 0;
      for (int j = 0; j < n; ++j) {
        if (j == col) continue;
        sub[i - 1][cj++] = m[i][j];
      }
    }
    sum += ((col % 2 == 0) ? 1.0 : -1.0) * m[0][col] * naive_det(sub, n - 1);
  }
  return sum;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Fourth-order central difference.
inline double central_difference4(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace kitecc::testing
