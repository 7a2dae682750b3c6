#include <doctest.h>

#include <stdexcept>

#include <Eigen/Core>

#include "fracweyl/errors.hpp"
#include "fracweyl/grid.hpp"

using namespace fracweyl;

namespace {
const double pi = 3.141592653589793;
}

TEST_CASE("interval grids enumerate strictly interior lattice points") {
  const Grid g = grid_points(Domain::interval(0.0, 1.0), 0.25);
  REQUIRE(g.size() == 3);
  CHECK(g.node(0)(0) == doctest::Approx(0.25));
  CHECK(g.node(1)(0) == doctest::Approx(0.5));
  CHECK(g.node(2)(0) == doctest::Approx(0.75));
  CHECK(g.lattice_coords(0)(0) == 1);
  CHECK(g.lattice_diameter() == 2);

  // The right endpoint is a lattice point but the domain is open.
  const Grid g2 = grid_points(Domain::interval(0.0, pi), pi / 8.0);
  CHECK(g2.size() == 7);
}

TEST_CASE("disk grid at h = 1/2") {
  const Grid g = grid_points(Domain::disk(Eigen::Vector2d(0, 0), 1.0), 0.5);
  CHECK(g.size() == 9);
  int center = -1;
  for (int i = 0; i < g.size(); ++i)
    if (g.lattice_coords(i).isZero()) center = i;
  CHECK(center >= 0);
}

TEST_CASE("find inverts lattice_coords") {
  const Grid g = grid_points(Domain::interval(0.0, 1.0), 0.125);
  for (int i = 0; i < g.size(); ++i) {
    const auto idx = g.find(g.lattice_coords(i));
    REQUIRE(idx.has_value());
    CHECK(*idx == i);
  }
  Eigen::VectorXi off(1);
  off << 99;
  CHECK_FALSE(g.find(off).has_value());
}

TEST_CASE("grids of nested domains share the lattice") {
  const Domain d = Domain::interval(0.0, 1.0);
  const Grid big = grid_points(d, 0.25);
  const Grid small = grid_points(d.eroded(0.3), 0.25);
  REQUIRE(small.size() == 1);
  const std::vector<int> idx = small.subset_indices(big);
  REQUIRE(idx.size() == 1);
  CHECK(big.node(idx[0])(0) == doctest::Approx(0.5));

  const Grid other = grid_points(d, 0.2);
  CHECK_THROWS_AS(small.subset_indices(other), std::invalid_argument);
}

TEST_CASE("constructor validation") {
  Eigen::MatrixXi dup(2, 1);
  dup << 3, 3;
  CHECK_THROWS_AS(Grid(1, 0.5, dup), std::invalid_argument);
  Eigen::MatrixXi empty(0, 1);
  CHECK_THROWS_AS(Grid(1, 0.5, empty), std::invalid_argument);
  Eigen::MatrixXi one(1, 1);
  one << 4;
  CHECK_THROWS_AS(Grid(1, -0.5, one), std::invalid_argument);
  CHECK_THROWS_AS(Grid(3, 0.5, one), std::invalid_argument);
}

TEST_CASE("too coarse a spacing leaves no interior node") {
  CHECK_THROWS_AS(grid_points(Domain::interval(0.0, 0.1), 0.5), numeric_error);
  CHECK_THROWS_AS(grid_points(Domain::interval(0.0, 1.0), -1.0), std::invalid_argument);
}

TEST_CASE("lattice bounds") {
  const Grid g = grid_points(Domain::interval(0.0, 1.0), 0.25);
  CHECK(g.lattice_min()(0) == 1);
  CHECK(g.lattice_max()(0) == 3);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.dimension() == 1);
}
