#include <algorithm>
#include <cmath>
#include <vector>

#include "acquisim/errors.hpp"
#include "acquisim/simulation.hpp"
#include "doctest.h"

using namespace acquisim;

TEST_CASE("bootstrap mean is the sample mean") {
  const std::vector<double> values = {1.0, 2.0, 3.0, 4.0};
  const auto ci = bootstrap_ci(values, 2000, 0.95, 5);
  REQUIRE(ci.has_value());
  CHECK(ci->mean == doctest::Approx(2.5));
  CHECK(ci->ci_low <= ci->mean);
  CHECK(ci->ci_high >= ci->mean);
}

TEST_CASE("two-point samples span their range at 95 percent") {
  // Resample means of {0, 1} are 0, 0.5, 1 with probabilities 1/4, 1/2,
  // 1/4, so the 2.5th and 97.5th percentiles hit the extremes.
  const auto ci = bootstrap_ci({0.0, 1.0}, 10000, 0.95, 42);
  REQUIRE(ci.has_value());
  CHECK(ci->mean == doctest::Approx(0.5));
  CHECK(ci->ci_low == 0.0);
  CHECK(ci->ci_high == 1.0);
}

TEST_CASE("constant values give a degenerate interval") {
  const auto ci = bootstrap_ci({2.0, 2.0, 2.0}, 500, 0.95, 1);
  REQUIRE(ci.has_value());
  CHECK(ci->mean == 2.0);
  CHECK(ci->ci_low == 2.0);
  CHECK(ci->ci_high == 2.0);
}

TEST_CASE("the interval narrows as the level drops") {
  std::vector<double> values;
  for (int i = 0; i < 30; ++i) values.push_back(std::sin(i * 1.7) * 2.0);
  const auto wide = bootstrap_ci(values, 4000, 0.99, 9);
  const auto narrow = bootstrap_ci(values, 4000, 0.5, 9);
  REQUIRE(wide.has_value());
  REQUIRE(narrow.has_value());
  CHECK(narrow->ci_low >= wide->ci_low);
  CHECK(narrow->ci_high <= wide->ci_high);
  CHECK(narrow->ci_low < narrow->ci_high);
}

TEST_CASE("the interval brackets the truth on gaussian data") {
  // 60 draws from N(10, 1): the 95 percent interval of the mean is roughly
  // 10 +- 0.25, so containing 10 and excluding 9 is a weak, stable claim.
  Rng rng(33);
  std::vector<double> values;
  for (int i = 0; i < 60; ++i) values.push_back(10.0 + rng.normal());
  const auto ci = bootstrap_ci(values, 4000, 0.95, 2);
  REQUIRE(ci.has_value());
  CHECK(ci->ci_low < 10.1);
  CHECK(ci->ci_high > 9.9);
  CHECK(ci->ci_low > 9.0);
  CHECK(ci->ci_high < 11.0);
}

TEST_CASE("bootstrap is deterministic in the seed") {
  std::vector<double> values = {0.3, 0.9, 0.1, 0.7, 0.5};
  const auto a = bootstrap_ci(values, 1000, 0.95, 77);
  const auto b = bootstrap_ci(values, 1000, 0.95, 77);
  const auto c = bootstrap_ci(values, 1000, 0.95, 78);
  REQUIRE(a.has_value());
  CHECK(a->ci_low == b->ci_low);
  CHECK(a->ci_high == b->ci_high);
  CHECK((a->ci_low != c->ci_low || a->ci_high != c->ci_high));
}

TEST_CASE("degenerate inputs are rejected or missing") {
  CHECK_FALSE(bootstrap_ci({}, 1000, 0.95, 0).has_value());
  CHECK_FALSE(bootstrap_ci({1.0}, 1000, 0.95, 0).has_value());
  CHECK_THROWS_AS(bootstrap_ci({1.0, 2.0}, 99, 0.95, 0), ConfigError);
  CHECK_THROWS_AS(bootstrap_ci({1.0, 2.0}, 1000, 0.0, 0), ConfigError);
  CHECK_THROWS_AS(bootstrap_ci({1.0, 2.0}, 1000, 1.0, 0), ConfigError);
}
