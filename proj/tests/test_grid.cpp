#include <doctest.h>

#include <cmath>
#include <random>

#include "gpdp/errors.hpp"
#include "gpdp/grid.hpp"

using gpdp::Box;
using gpdp::Grid;
using gpdp::Mat;
using gpdp::Vec;

TEST_CASE("build_box pinned half-width and nesting") {
  const Box b3 = gpdp::build_box(3, 20.0, 2);
  CHECK(b3.hi[0] == doctest::Approx(7.34324049204245).epsilon(1e-14));
  CHECK(b3.lo[0] == -b3.hi[0]);
  CHECK(b3.dims() == 2);

  const Box b0 = gpdp::build_box(0, 20.0, 2);
  CHECK(b0.lo[0] == 0.0);
  CHECK(b0.hi[0] == 0.0);

  for (int t = 0; t < 5; ++t) {
    const Box inner = gpdp::build_box(t, 7.0, 1);
    const Box outer = gpdp::build_box(t + 1, 7.0, 1);
    CHECK(inner.lo[0] >= outer.lo[0]);
    CHECK(inner.hi[0] <= outer.hi[0]);
  }

  CHECK_THROWS_AS(gpdp::build_box(1, 1.0, 2), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::build_box(1, 0.9, 2), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::build_box(-1, 2.0, 2), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::build_box(1, 2.0, 0), gpdp::invalid_input);
}

TEST_CASE("grid spacing honors the representative-distance requirement") {
  const Box box{{-5.0}, {5.0}};
  const Grid g = Grid::build(box, 0.01);
  CHECK(g.cells(0) == 500);
  CHECK(g.spacing(0) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(g.total_cells() == 500);

  // Two dimensions tighten the per-axis spacing by sqrt(2).
  const Box box2{{-1.0, -1.0}, {1.0, 1.0}};
  const Grid g2 = Grid::build(box2, 0.1);
  const double h = g2.spacing(0);
  CHECK((h / 2.0) * std::sqrt(2.0) <= 0.1 + 1e-15);
  CHECK(g2.cells(0) * h == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("representative distance property over random points") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Box box{{-2.0, -2.0}, {2.0, 2.0}};
  const double beta = 0.07;
  const Grid g = Grid::build(box, beta);
  for (int it = 0; it < 20000; ++it) {
    const Vec x{u(rng), u(rng)};
    const std::int64_t flat = gpdp::project(g, x);
    const Vec r = g.representative(flat);
    const double dist = std::hypot(x[0] - r[0], x[1] - r[1]);
    CHECK(dist <= beta + 1e-12);
  }
}

TEST_CASE("half-open cells: edges belong to the upper cell, top edge to the last") {
  const Box box{{0.0}, {1.0}};
  const Grid g = Grid::build(box, 0.05);  // 10 cells of width 0.1
  CHECK(g.cells(0) == 10);
  CHECK(gpdp::project(g, {0.0}) == 0);
  CHECK(gpdp::project(g, {g.edge(0, 1)}) == 1);
  CHECK(gpdp::project(g, {0.25}) == 2);
  CHECK(gpdp::project(g, {0.999}) == 9);
  CHECK(gpdp::project(g, {1.0}) == 9);
  CHECK_THROWS_AS(gpdp::project(g, {1.0000001}), gpdp::invalid_input);
  CHECK_THROWS_AS(gpdp::project(g, {-0.0000001}), gpdp::invalid_input);
}

TEST_CASE("project agrees with edge arithmetic on every edge") {
  const Box box{{-3.0}, {3.0}};
  const Grid g = Grid::build(box, 0.011);
  for (std::int64_t j = 0; j < g.cells(0); ++j) {
    CHECK(gpdp::project(g, {g.edge(0, j)}) == j);
    CHECK(gpdp::project(g, {g.rep(0, j)}) == j);
  }
  CHECK(gpdp::project(g, {g.edge(0, g.cells(0))}) == g.cells(0) - 1);
}

TEST_CASE("degenerate box yields a single cell at the point") {
  const Box box{{0.0, -1.0}, {0.0, 1.0}};
  const Grid g = Grid::build(box, 0.25);
  CHECK(g.cells(0) == 1);
  CHECK(g.spacing(0) == 0.0);
  CHECK(g.rep(0, 0) == 0.0);
  CHECK(gpdp::project(g, {0.0, 0.0}) >= 0);
  CHECK_THROWS_AS(gpdp::project(g, {0.1, 0.0}), gpdp::invalid_input);
}

TEST_CASE("cell budget is enforced with required and allowed counts") {
  const Box box{{-8.0, -8.0}, {8.0, 8.0}};
  try {
    Grid::build(box, 1e-4, 1000000);
    FAIL("expected resource_error");
  } catch (const gpdp::resource_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1000000") != std::string::npos);  // allowed
    CHECK(msg.find("cells") != std::string::npos);
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid::build(Box{{0.0}, {1.0}}, 0.0), gpdp::invalid_input);
  CHECK_THROWS_AS(Grid::build(Box{{0.0}, {-1.0}}, 0.1), gpdp::invalid_input);
  CHECK_THROWS_AS(Grid::build_with_cells(Box{{0.0}, {1.0}}, {0}), gpdp::invalid_input);
  CHECK_THROWS_AS(Grid::build_with_cells(Box{{0.0}, {0.0}}, {3}), gpdp::invalid_input);
  CHECK_NOTHROW(Grid::build_with_cells(Box{{0.0}, {0.0}}, {1}));
}

TEST_CASE("alpha_for pinned values") {
  const Mat orthant{{1.0}, {1.0}};
  CHECK(gpdp::alpha_for(20.0, orthant) ==
        doctest::Approx(0.08170779653072699).epsilon(1e-13));
  const Mat unit{{1.0}, {1.0}};
  const double e = std::exp(1.0);
  CHECK(gpdp::alpha_for(e, unit) == doctest::Approx(1.0405201900457778).epsilon(1e-13));
  CHECK_THROWS_AS(gpdp::alpha_for(1.0, orthant), gpdp::invalid_input);
  const Mat zero{{0.0}, {0.0}};
  CHECK_THROWS_AS(gpdp::alpha_for(2.0, zero), gpdp::invalid_input);
}

TEST_CASE("alpha_for uses the largest entry across the whole matrix") {
  const Mat A{{0.5, 0.7, 1.0, 0.9}, {0.2, 0.7, 0.5, 1.0}};
  const Mat B{{1.0}, {0.3}};  // same row count, same largest |entry|
  CHECK(gpdp::alpha_for(5.0, A) == doctest::Approx(gpdp::alpha_for(5.0, B)).epsilon(1e-15));
}
