#include <doctest.h>

#include <cmath>

#include "kitecc/error.hpp"
#include "kitecc/geometry.hpp"
#include "kitecc/kite.hpp"
#include "support.hpp"

using namespace kitecc;
using kitecc::testing::Sampler;
using kitecc::testing::unit_diamond;

namespace {

DistanceVector unit_square_distances() {
  const double s2 = std::sqrt(2.0);
  return DistanceVector(1.0, s2, 1.0, 1.0, s2, 1.0);
}

DistanceVector tetrahedron_distances() { return DistanceVector(1, 1, 1, 1, 1, 1); }

}  // namespace

TEST_CASE("pair index convention") {
  CHECK(pair_index(0, 1) == 0);
  CHECK(pair_index(0, 2) == 1);
  CHECK(pair_index(0, 3) == 2);
  CHECK(pair_index(1, 2) == 3);
  CHECK(pair_index(1, 3) == 4);
  CHECK(pair_index(2, 3) == 5);
  CHECK(pair_index(3, 1) == 4);
}

TEST_CASE("mutual_distances") {
  SUBCASE("unit diamond") {
    const DistanceVector d = mutual_distances(unit_diamond());
    const double s2 = std::sqrt(2.0);
    CHECK(d.r12() == doctest::Approx(s2));
    CHECK(d.r23() == doctest::Approx(s2));
    CHECK(d.r34() == doctest::Approx(s2));
    CHECK(d.r14() == doctest::Approx(s2));
    CHECK(d.r13() == doctest::Approx(2.0));
    CHECK(d.r24() == doctest::Approx(2.0));
  }
  SUBCASE("kite chart diagonals") {
    const DistanceVector d = mutual_distances(kite_positions({1.2, 1.0, 0.9}));
    CHECK(d.r13() == doctest::Approx(2.0));
    CHECK(d.r24() == doctest::Approx(2.1));
  }
  SUBCASE("collinear points") {
    PlanarConfig c;
    c.positions = {Point2{0, 0}, Point2{1, 0}, Point2{2, 0}, Point2{3, 0}};
    const DistanceVector d = mutual_distances(c);
    const std::array<double, 6> want{1, 2, 3, 1, 2, 1};
    for (std::size_t k = 0; k < 6; ++k) CHECK(d[k] == doctest::Approx(want[k]));
  }
  SUBCASE("coincident points") {
    PlanarConfig c = unit_diamond();
    c.positions[3] = c.positions[1];
    try {
      mutual_distances(c);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateConfiguration);
    }
  }
}

TEST_CASE("mutual_distances is rigid-motion invariant and scales linearly") {
  Sampler rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const PlanarConfig c = rng.random_config();
    const DistanceVector d = mutual_distances(c);
    const double th = rng.uniform(0, 2 * M_PI), tx = rng.uniform(-5, 5), ty = rng.uniform(-5, 5);
    const double t = rng.uniform(0.1, 10.0);
    PlanarConfig moved = c, dilated = c;
    for (std::size_t i = 0; i < 4; ++i) {
      const Point2 p = c.positions[i];
      moved.positions[i] = {std::cos(th) * p.x - std::sin(th) * p.y + tx,
                            std::sin(th) * p.x + std::cos(th) * p.y + ty};
      dilated.positions[i] = {t * p.x, t * p.y};
    }
    const DistanceVector dm = mutual_distances(moved);
    const DistanceVector dd = mutual_distances(dilated);
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(dm[k] == doctest::Approx(d[k]).epsilon(1e-12));
      CHECK(dd[k] == doctest::Approx(t * d[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("cayley_menger") {
  CHECK(std::abs(cayley_menger(unit_square_distances())) < 1e-13);
  // Regular tetrahedron: V = 288 vol^2 with vol = 1/(6 sqrt 2).
  const double vol = 1.0 / (6.0 * std::sqrt(2.0));
  CHECK(cayley_menger(tetrahedron_distances()) == doctest::Approx(288.0 * vol * vol).epsilon(1e-13));
  CHECK(cayley_menger(tetrahedron_distances()) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(kitecc::testing::naive_cayley_menger({1, 1, 1, 1, 1, 1}) == doctest::Approx(4.0));
  for (double a : {0.5, 1.0, 1.7}) {
    const DistanceVector d = kite_distances({a, 0.8, 0.6});
    CHECK(std::abs(cayley_menger(d)) <= 1e-12 * planarity_scale(d));
  }
}

TEST_CASE("cayley_menger agrees with a naive Laplace expansion") {
  Sampler rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    PairValues r{};
    for (auto& v : r) v = rng.uniform(0.5, 2.0);
    PairValues sq{};
    for (std::size_t k = 0; k < 6; ++k) sq[k] = r[k] * r[k];
    const double want = kitecc::testing::naive_cayley_menger(sq);
    CHECK(cayley_menger(DistanceVector(r)) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("planar points always give V = 0") {
  Sampler rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const DistanceVector d = mutual_distances(rng.random_config());
    CHECK(std::abs(cayley_menger(d)) <= kPlanarityTol * planarity_scale(d));
  }
}

TEST_CASE("cayley_menger_gradient") {
  SUBCASE("unit diamond matches -32 A_i A_j and finite differences") {
    const DistanceVector d = mutual_distances(unit_diamond());
    const PairValues g = cayley_menger_gradient(d);
    CHECK(g[pair_index(0, 2)] == doctest::Approx(-32.0).epsilon(1e-12));
    // Finite-difference oracle in r13^2, step 1e-6.
    auto v_of = [&](double x13) {
      DistanceVector e = d;
      e[1] = std::sqrt(x13);
      return cayley_menger(e);
    };
    const double fd = kitecc::testing::central_difference(v_of, 4.0, 1e-6);
    CHECK(fd == doctest::Approx(-32.0).epsilon(1e-6));
  }
  SUBCASE("rhombus symmetry") {
    const DistanceVector d = kite_distances({1.3, 1.0, 1.3});
    const PairValues g = cayley_menger_gradient(d);
    CHECK(g[pair_index(0, 1)] == doctest::Approx(g[pair_index(0, 3)]).epsilon(1e-12));
  }
  SUBCASE("non-planar input is rejected") {
    try {
      cayley_menger_gradient(tetrahedron_distances());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FormulaInapplicable);
    }
  }
}

TEST_CASE("cayley_menger_gradient matches finite differences and -32 A_i A_j") {
  Sampler rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const PlanarConfig c = rng.random_config();
    const DistanceVector d = mutual_distances(c);
    const PairValues g = cayley_menger_gradient(d);
    const PairValues via_areas = cayley_menger_gradient_from_areas(oriented_areas(c));
    const double gscale = std::pow(d.max(), 6);
    for (std::size_t k = 0; k < 6; ++k) {
      auto v_of = [&](double x) {
        DistanceVector e = d;
        e[k] = std::sqrt(x);
        return cayley_menger(e);
      };
      const double x0 = d[k] * d[k];
      // V is quadratic in each squared distance, so the central difference is exact up to rounding.
      const double fd = kitecc::testing::central_difference(v_of, x0, 1e-3 * x0);
      CHECK(std::abs(g[k] - fd) <= 1e-7 * gscale);
      CHECK(std::abs(g[k] - via_areas[k]) <= 1e-9 * gscale);
    }
  }
}

TEST_CASE("cayley_menger_hessian matches finite differences of the gradient") {
  Sampler rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    PairValues r{};
    for (auto& v : r) v = rng.uniform(0.7, 1.6);
    const DistanceVector d(r);
    const auto h = cayley_menger_hessian(d);
    for (std::size_t l = 0; l < 6; ++l) {
      const double x0 = d[l] * d[l];
      const double step = 1e-4 * x0;
      DistanceVector up = d, down = d;
      up[l] = std::sqrt(x0 + step);
      down[l] = std::sqrt(x0 - step);
      const PairValues gu = cayley_menger_gradient_unchecked(up);
      const PairValues gd = cayley_menger_gradient_unchecked(down);
      for (std::size_t k = 0; k < 6; ++k) {
        const double fd = (gu[k] - gd[k]) / (2.0 * step);
        CHECK(h[k][l] == doctest::Approx(fd).epsilon(1e-6).scale(std::pow(d.max(), 4)));
      }
    }
  }
}

TEST_CASE("oriented_areas") {
  SUBCASE("unit diamond sign pattern") {
    const OrientedAreas a = oriented_areas(unit_diamond());
    CHECK(a[0] == doctest::Approx(1.0));
    CHECK(a[1] == doctest::Approx(-1.0));
    CHECK(a[2] == doctest::Approx(1.0));
    CHECK(a[3] == doctest::Approx(-1.0));
  }
  SUBCASE("three collinear bodies") {
    PlanarConfig c;
    c.positions = {Point2{0, 0}, Point2{1, 0}, Point2{2, 0}, Point2{0, 1}};
    CHECK(oriented_areas(c)[3] == 0.0);
  }
  SUBCASE("kite chart (1,1,1) has equal magnitudes") {
    const OrientedAreas a = oriented_areas(kite_positions({1, 1, 1}));
    for (double v : a.a) CHECK(std::abs(v) == doctest::Approx(1.0));
  }
  SUBCASE("convex CCW configurations alternate in sign and sum to zero") {
    Sampler rng(29);
    for (int trial = 0; trial < 500; ++trial) {
      const PlanarConfig c = rng.random_convex_config();
      REQUIRE(convexity_order_check(c));
      const OrientedAreas a = oriented_areas(c);
      CHECK(a[0] > 0.0);
      CHECK(a[1] < 0.0);
      CHECK(a[2] > 0.0);
      CHECK(a[3] < 0.0);
      CHECK(std::abs(a[0] + a[1] + a[2] + a[3]) < 1e-12);
    }
  }
}

TEST_CASE("is_realizable_planar") {
  CHECK(is_realizable_planar(unit_square_distances()));
  CHECK_FALSE(is_realizable_planar(tetrahedron_distances()));
  CHECK_FALSE(is_realizable_planar(DistanceVector(10, 1, 1, 1, 1, 1)));
  // The tolerance scales with r_max^8.
  CHECK(is_realizable_planar(unit_square_distances().scaled(1e3)));
  CHECK_FALSE(is_realizable_planar(tetrahedron_distances().scaled(1e3)));
}

TEST_CASE("convexity_order_check") {
  CHECK(convexity_order_check(unit_diamond()));
  PlanarConfig interior;
  interior.positions = {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}, Point2{0.2, 0.2}};
  CHECK_FALSE(convexity_order_check(interior));
  PlanarConfig clockwise = unit_diamond();
  std::swap(clockwise.positions[1], clockwise.positions[3]);
  CHECK_FALSE(convexity_order_check(clockwise));
  PlanarConfig crossed = unit_diamond();
  std::swap(crossed.positions[1], crossed.positions[2]);
  CHECK_FALSE(convexity_order_check(crossed));
  PlanarConfig on_edge;
  on_edge.positions = {Point2{0, 0}, Point2{1, 0}, Point2{2, 0}, Point2{1, 1}};
  CHECK_FALSE(convexity_order_check(on_edge));
  Sampler rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const KitePoint k{rng.uniform(0.1, 3), rng.uniform(0.1, 3), rng.uniform(0.1, 3)};
    CHECK(convexity_order_check(kite_positions(k)));
  }
}

TEST_CASE("realize_planar reproduces the distances") {
  Sampler rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const PlanarConfig c = rng.random_convex_config();
    const DistanceVector d = mutual_distances(c);
    const auto realized = realize_planar(d);
    REQUIRE(realized.has_value());
    const DistanceVector back = mutual_distances(*realized);
    for (std::size_t k = 0; k < 6; ++k) CHECK(back[k] == doctest::Approx(d[k]).epsilon(1e-9));
    CHECK(convexity_order_check(*realized));
  }
  CHECK_FALSE(realize_planar(tetrahedron_distances()).has_value());
}
