#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "lamimo/csv.hpp"
#include "lamimo/error.hpp"
#include "lamimo/geometry.hpp"

using namespace lamimo;

namespace {

// Independent high-precision evaluation of 10^-3.53 / d^3.76 (40 digits).
constexpr double kGain1m = 2.951209226666385707934928423192007490531e-4;
constexpr double kGain35m = 4.616407662801807553441722323279186855684e-10;
constexpr double kGain500m = 2.09832513883731553197434304384242358896e-14;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool inside_hexagon(double x, double y, double apothem) {
  for (int k = 0; k < 3; ++k) {
    const double t = k * M_PI / 3.0;
    if (std::abs(x * std::cos(t) + y * std::sin(t)) > apothem * (1.0 + 1e-12)) return false;
  }
  return true;
}

GeometryConfig small_single_cell(int points) {
  GeometryConfig g;
  g.num_cells = 1;
  g.grid_points_per_cell = points;
  return g;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("reference layout has 19 cells and 6 wrap offsets") {
    const GeometryConfig g;
    const auto layout = build_layout(g);
    CHECK(layout.num_cells() == 19);
    CHECK(layout.wrap_offsets.size() == 6);
    CHECK(layout.cell_centers[0].x == 0.0);
    CHECK(layout.cell_centers[0].y == 0.0);
    const double isd = g.inter_site_distance();
    // Each wrap offset moves the cluster by sqrt(19) inter-site distances.
    for (const auto& off : layout.wrap_offsets) CHECK(std::hypot(off.x, off.y) == doctest::Approx(std::sqrt(19.0) * isd));
    // Neighbouring centres sit one ISD apart, and all centres are distinct.
    int neighbours = 0;
    for (int c = 1; c < 19; ++c) {
      const auto p = layout.cell_centers[static_cast<std::size_t>(c)];
      if (std::abs(std::hypot(p.x, p.y) - isd) < 1e-9) ++neighbours;
    }
    CHECK(neighbours == 6);
  }

  TEST_CASE("invalid configurations name the offending field") {
    GeometryConfig g;
    g.min_distance_m = g.cell_radius_m;
    CHECK_THROWS_WITH_AS(build_layout(g), doctest::Contains("min_distance_m"), Error);
    g = {};
    g.num_cells = 7;
    CHECK_THROWS_WITH_AS(build_layout(g), doctest::Contains("num_cells"), Error);
    g = {};
    g.grid_points_per_cell = 0;
    CHECK_THROWS_AS(build_layout(g), Error);
    g = {};
    g.pathloss_exponent = 2.0;
    CHECK_THROWS_AS(build_layout(g), Error);
  }

  TEST_CASE("test points: exact count, inside the hexagon, outside the exclusion disc") {
    const GeometryConfig g;
    const auto layout = build_layout(g);
    const double apothem = g.inter_site_distance() / 2.0;
    for (int c = 0; c < layout.num_cells(); ++c) {
      const auto& pts = layout.test_points[static_cast<std::size_t>(c)];
      REQUIRE(pts.size() == 15000);
      const auto centre = layout.cell_centers[static_cast<std::size_t>(c)];
      double nearest = INFINITY;
      bool all_inside = true;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts.x[i] - centre.x, dy = pts.y[i] - centre.y;
        nearest = std::min(nearest, std::hypot(dx, dy));
        all_inside = all_inside && inside_hexagon(dx, dy, apothem);
      }
      CHECK(nearest >= 35.0);
      CHECK(all_inside);
    }
  }

  TEST_CASE("odd point counts are honoured exactly") {
    for (int n : {1, 7, 1001}) {
      const auto layout = build_layout(small_single_cell(n));
      CHECK(layout.test_points[0].size() == static_cast<std::size_t>(n));
    }
  }

  TEST_CASE("test points are uniform by area") {
    const GeometryConfig g;
    const auto layout = build_layout(g);
    const auto& pts = layout.test_points[0];
    const double d0 = g.min_distance_m;
    const double hex_area = 1.5 * std::sqrt(3.0) * g.cell_radius_m * g.cell_radius_m;
    const double region = hex_area - M_PI * d0 * d0;
    for (double r : {100.0, 200.0, 300.0, 400.0}) {
      std::size_t inside = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) inside += std::hypot(pts.x[i], pts.y[i]) <= r ? 1 : 0;
      const double expected = M_PI * (r * r - d0 * d0) / region;
      CHECK(static_cast<double>(inside) / pts.size() == doctest::Approx(expected).epsilon(0.01));
    }
  }

  TEST_CASE("path loss matches the high-precision oracle") {
    const GeometryConfig g;
    CHECK(rel(path_loss(1.0, g), kGain1m) < 1e-12);
    CHECK(rel(path_loss(35.0, g), kGain35m) < 1e-12);
    CHECK(rel(path_loss(500.0, g), kGain500m) < 1e-12);
    double prev = path_loss(1.0, g);
    for (double d = 2.0; d < 5000.0; d *= 1.37) {
      const double v = path_loss(d, g);
      CHECK(v < prev);
      prev = v;
    }
    CHECK_THROWS_AS(path_loss(0.0, g), Error);
    CHECK_THROWS_AS(path_loss(-3.0, g), Error);
  }

  TEST_CASE("wrapped distance") {
    const GeometryConfig g;
    const auto layout = build_layout(g);
    const double isd = g.inter_site_distance();

    SUBCASE("own centre offset by d_min") {
      for (int c : {0, 5, 18}) {
        const auto p = layout.cell_centers[static_cast<std::size_t>(c)];
        CHECK(wrapped_distance(layout, c, {p.x + 35.0, p.y}) == doctest::Approx(35.0).epsilon(1e-14));
      }
    }
    SUBCASE("midpoint between two neighbours is equidistant") {
      const Vec2 mid{isd / 2.0, 0.0};
      int right = -1;
      for (int c = 1; c < 19; ++c) {
        const auto p = layout.cell_centers[static_cast<std::size_t>(c)];
        if (std::abs(p.x - isd) < 1e-9 && std::abs(p.y) < 1e-9) right = c;
      }
      REQUIRE(right > 0);
      CHECK(wrapped_distance(layout, 0, mid) == doctest::Approx(isd / 2.0));
      CHECK(wrapped_distance(layout, right, mid) == doctest::Approx(isd / 2.0));
    }
    SUBCASE("never longer than the unwrapped distance; equals brute force over 7 images") {
      std::mt19937_64 rng(7);
      std::uniform_int_distribution<int> cell(0, 18);
      std::uniform_int_distribution<std::size_t> idx(0, 14999);
      for (int t = 0; t < 100; ++t) {
        const int owner = cell(rng), d = cell(rng);
        const auto point = layout.test_points[static_cast<std::size_t>(owner)][idx(rng)];
        const auto centre = layout.cell_centers[static_cast<std::size_t>(d)];
        const double plain = std::hypot(point.x - centre.x, point.y - centre.y);
        double brute = plain;
        for (const auto& off : layout.wrap_offsets) {
          brute = std::min(brute, std::hypot(point.x - centre.x - off.x, point.y - centre.y - off.y));
        }
        const double w = wrapped_distance(layout, d, point);
        CHECK(w <= plain * (1.0 + 1e-15));
        CHECK(w == doctest::Approx(brute).epsilon(1e-14));
        // With wrap-around no base station is farther than the cluster radius.
        CHECK(w < 3.0 * isd);
      }
    }
    SUBCASE("index out of range") { CHECK_THROWS_AS(wrapped_distance(layout, 19, {0.0, 0.0}), Error); }
  }

  TEST_CASE("reference coupling is symmetric across cells") {
    const auto& c = fixtures::reference_coupling();
    REQUIRE(c.num_cells() == 19);
    CHECK_NOTHROW(c.validate());
    for (int i = 0; i < 19; ++i) {
      CHECK(rel(c.lambda_serving[static_cast<std::size_t>(i)], c.lambda_serving[0]) < 1e-9);
      CHECK(rel(c.cross_sum(i), c.cross_sum(0)) < 1e-6);
      CHECK(c.lambda_cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0.0);
      for (int j = 0; j < 19; ++j) {
        if (i == j) continue;
        const double a = c.lambda_cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const double b = c.lambda_cross[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        CHECK(a > 0.0);
        CHECK(rel(a, b) < 1e-6);
        // Even the adjacent cells stay below the serving link on average.
        CHECK(a < 1.0);
      }
    }
  }

  TEST_CASE("serving term against an independent area integral") {
    // E[d^alpha] over the hexagon minus the disc, by polar quadrature on one
    // 30-degree half-sector (the region is symmetric), divided by the path-loss coefficient.
    const GeometryConfig g;
    const double apothem = g.inter_site_distance() / 2.0;
    const double a = g.pathloss_exponent;
    const int steps = 20000;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double t = (i + 0.5) * (M_PI / 6.0) / steps;
      const double rmax = apothem / std::cos(t);
      const double r0 = g.min_distance_m;
      num += (std::pow(rmax, a + 2.0) - std::pow(r0, a + 2.0)) / (a + 2.0);
      den += (rmax * rmax - r0 * r0) / 2.0;
    }
    const double expected = num / den / g.pathloss_coeff;
    CHECK(rel(fixtures::reference_coupling().lambda_serving[0], expected) < 2e-3);
  }

  TEST_CASE("single cell: no interferers") {
    const auto g = small_single_cell(600);
    const auto c = compute_coupling(build_layout(g), g);
    REQUIRE(c.num_cells() == 1);
    CHECK(c.lambda_serving[0] > 0.0);
    CHECK(c.lambda_cross[0][0] == 0.0);
    CHECK(c.cross_sum(0) == 0.0);
  }

  TEST_CASE("all points at d_min give the inverse gain at d_min") {
    GeometryConfig g = small_single_cell(6);
    NetworkLayout layout;
    layout.cell_centers.push_back({0.0, 0.0});
    PointSet pts;
    for (int k = 0; k < 12; ++k) {
      pts.x.push_back(35.0 * std::cos(k * 0.5));
      pts.y.push_back(35.0 * std::sin(k * 0.5));
    }
    layout.test_points.push_back(pts);
    const auto c = compute_coupling(layout, g);
    CHECK(rel(c.lambda_serving[0], 1.0 / path_loss(35.0, g)) < 1e-12);
  }

  TEST_CASE("larger cells raise the serving term") {
    auto g = small_single_cell(3000);
    const double small = compute_coupling(build_layout(g), g).lambda_serving[0];
    g.cell_radius_m = 550.0;
    const double large = compute_coupling(build_layout(g), g).lambda_serving[0];
    CHECK(large > small);
  }

  TEST_CASE("doubling the grid moves every entry by less than 1%") {
    GeometryConfig g;
    g.grid_points_per_cell = 30000;
    const auto fine = compute_coupling(build_layout(g), g);
    const auto& ref = fixtures::reference_coupling();
    for (std::size_t c = 0; c < 19; ++c) {
      CHECK(rel(fine.lambda_serving[c], ref.lambda_serving[c]) < 0.01);
      for (std::size_t d = 0; d < 19; ++d) {
        if (c != d) CHECK(rel(fine.lambda_cross[c][d], ref.lambda_cross[c][d]) < 0.01);
      }
    }
  }

  TEST_CASE("coupling is deterministic and independent of the kernel dispatch") {
    GeometryConfig g;
    g.grid_points_per_cell = 3001;
    const auto layout = build_layout(g);
    const auto a = compute_coupling(layout, g);
    const auto prev = simd::force_isa(simd::Isa::scalar);
    const auto b = compute_coupling(layout, g);
    simd::force_isa(prev);
    CHECK(a.lambda_serving == b.lambda_serving);
    CHECK(a.lambda_cross == b.lambda_cross);
    const auto again = compute_coupling(build_layout(g), g);
    CHECK(a.lambda_cross == again.lambda_cross);
  }

  TEST_CASE("coupling CSV carries the serving term on the diagonal") {
    const auto dir = fixtures::scratch_dir("coupling");
    const auto g = small_single_cell(60);
    const auto c = compute_coupling(build_layout(g), g);
    write_coupling_csv(c, dir / "coupling.csv");
    const auto t = read_csv(dir / "coupling.csv");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.header == std::vector<std::string>{"c", "d", "lambda"});
    CHECK(parse_double(t.rows[0][2], "test") == c.lambda_serving[0]);
  }
}
