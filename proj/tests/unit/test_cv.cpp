#include <cmath>
#include <vector>

#include "acquisim/cross_validation.hpp"
#include "acquisim/dataset.hpp"
#include "acquisim/errors.hpp"
#include "acquisim/forest.hpp"
#include "acquisim/rng.hpp"
#include "doctest.h"

using namespace acquisim;

namespace {

PointRefs refs_of(const std::vector<Point>& points) {
  PointRefs refs;
  refs.reserve(points.size());
  for (const Point& p : points) refs.push_back(&p);
  return refs;
}

}  // namespace

TEST_CASE("constant targets tie every depth and the smallest wins") {
  std::vector<Point> pts;
  Rng rng(3);
  for (std::int64_t i = 0; i < 60; ++i) {
    pts.push_back({i, 0, {rng.normal(), rng.normal()}, 2.5});
  }
  CHECK(cross_validate_depth(refs_of(pts), {}, {2, 5, 8}, 3, 7) == 2);
  // The grid order must not matter.
  CHECK(cross_validate_depth(refs_of(pts), {}, {8, 2, 5}, 3, 7) == 2);
  CHECK(cross_validate_depth(refs_of(pts), {}, {5, 5, 2}, 3, 7) == 2);
}

TEST_CASE("a deep interaction prefers deeper trees") {
  // log consumption = xor-like interaction of two signs; a depth-1 stump
  // cannot express it, so its validation error is far worse.
  std::vector<Point> pts;
  Rng rng(17);
  for (std::int64_t i = 0; i < 240; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    const double y = ((a > 0.0) == (b > 0.0)) ? 4.0 : 0.5;
    pts.push_back({i, 0, {a, b}, y * std::exp(0.05 * rng.normal())});
  }
  ForestHyperparams hp;
  hp.num_trees = 20;
  const int chosen = cross_validate_depth(refs_of(pts), hp, {1, 6}, 3, 5);
  CHECK(chosen == 6);
}

TEST_CASE("selection is deterministic in the seed") {
  std::vector<Point> pts;
  Rng rng(29);
  for (std::int64_t i = 0; i < 90; ++i) {
    const double x = rng.normal();
    pts.push_back({i, 0, {x, rng.normal()},
                   std::exp(0.6 * x + 0.3 * rng.normal())});
  }
  const int a = cross_validate_depth(refs_of(pts), {}, {2, 4, 6}, 3, 11);
  const int b = cross_validate_depth(refs_of(pts), {}, {2, 4, 6}, 3, 11);
  CHECK(a == b);
}

TEST_CASE("degenerate grids and data are rejected") {
  std::vector<Point> pts;
  Rng rng(31);
  for (std::int64_t i = 0; i < 30; ++i) {
    pts.push_back({i, 0, {rng.normal()}, 1.0 + i});
  }
  CHECK_THROWS_AS(cross_validate_depth(refs_of(pts), {}, {}, 3, 0),
                  ConfigError);
  CHECK_THROWS_AS(cross_validate_depth(refs_of(pts), {}, {2}, 0, 0),
                  ConfigError);
  CHECK_THROWS_AS(cross_validate_depth(refs_of(pts), {}, {2}, 1, 0),
                  ConfigError);
}
