#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "acquisim/dataset.hpp"
#include "acquisim/errors.hpp"
#include "acquisim/strategies.hpp"
#include "doctest.h"

using namespace acquisim;

namespace {

// Hand-built stump: x[0] <= 0 predicts `left`, else `right`.
TreeModel stump(double left, double right) {
  TreeModel t;
  t.nodes.push_back({0, 0.0, 1, 2, 0.0});
  t.nodes.push_back({-1, 0.0, -1, -1, left});
  t.nodes.push_back({-1, 0.0, -1, -1, right});
  return t;
}

ForestModel committee(const std::vector<std::pair<double, double>>& trees) {
  ForestModel f;
  for (const auto& [l, r] : trees) f.trees.push_back(stump(l, r));
  f.dimensionality = 1;
  return f;
}

// Classifier with identity standardization: p = sigmoid(w*x + b).
LogisticModel raw_classifier(double w, double b) {
  LogisticModel m;
  m.kept = {0};
  m.means = {0.0};
  m.scales = {1.0};
  m.weights = {w};
  m.bias = b;
  m.dimensionality = 1;
  return m;
}

GroupMetrics metrics_for(const std::vector<std::pair<int, double>>& acc,
                         const std::vector<double>& mse,
                         const std::vector<double>& dp) {
  GroupMetrics gm;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    GroupEntry e;
    e.group = acc[i].first;
    e.label = "g" + std::to_string(e.group);
    e.n = 10;
    e.accuracy = acc[i].second;
    e.mse = mse[i];
    e.dp = dp[i];
    gm.entries.push_back(e);
  }
  return gm;
}

std::vector<Point> group_pool(const std::vector<int>& groups) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    pts.push_back({static_cast<std::int64_t>(i), groups[i], {0.0}, 1.0});
  }
  return pts;
}

PointRefs refs_of(const std::vector<Point>& points) {
  PointRefs refs;
  for (const Point& p : points) refs.push_back(&p);
  return refs;
}

double weight_of(const WeightVector& wv, std::int64_t id) {
  for (std::size_t i = 0; i < wv.ids.size(); ++i) {
    if (wv.ids[i] == id) return wv.weights[i];
  }
  FAIL("id not present");
  return -1.0;
}

}  // namespace

TEST_CASE("strategy names round-trip and reject unknowns") {
  const std::vector<std::string> names = {"uniform", "qbc",      "margin",
                                          "accuracy", "mse", "disparity"};
  for (const std::string& n : names) {
    CHECK(strategy_name(strategy_from_string(n)) == n);
  }
  CHECK_THROWS_AS(strategy_from_string("random-forest"), ConfigError);
  CHECK(is_group_based(StrategyKind::AccuracyWeighted));
  CHECK(is_group_based(StrategyKind::MseWeighted));
  CHECK(is_group_based(StrategyKind::DisparityWeighted));
  CHECK_FALSE(is_group_based(StrategyKind::QueryByCommittee));
  CHECK_FALSE(is_group_based(StrategyKind::Uniform));
  CHECK_FALSE(is_group_based(StrategyKind::MarginUncertainty));
}

TEST_CASE("uniform weights are equal and sum to one") {
  const WeightVector wv = uniform_weights({5, 9, 2});
  REQUIRE(wv.weights.size() == 3);
  for (double w : wv.weights) CHECK(w == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(uniform_weights({}), EmptyPool);
}

TEST_CASE("qbc weights are normalized committee variances") {
  // Committee predictions at x=-1: {1,2,3} (variance 2/3); at x=+1: {2,2,2}
  // (variance 0). All weight must land on the disputed point.
  const ForestModel f = committee({{1.0, 2.0}, {2.0, 2.0}, {3.0, 2.0}});
  const WeightVector wv =
      qbc_weights(f, {10, 11}, {{-1.0}, {1.0}});
  CHECK(weight_of(wv, 10) == 1.0);
  CHECK(weight_of(wv, 11) == 0.0);
}

TEST_CASE("qbc variance arithmetic is the population variance") {
  // Predictions at x=-1: {0, 6} -> variance 9; at x=+1: {4, 8} -> variance 4.
  const ForestModel f = committee({{0.0, 4.0}, {6.0, 8.0}});
  const WeightVector wv = qbc_weights(f, {1, 2}, {{-1.0}, {1.0}});
  CHECK(weight_of(wv, 1) == doctest::Approx(9.0 / 13.0));
  CHECK(weight_of(wv, 2) == doctest::Approx(4.0 / 13.0));
}

TEST_CASE("an agreeing committee falls back to uniform") {
  const ForestModel f = committee({{1.5, 2.5}, {1.5, 2.5}, {1.5, 2.5}});
  const WeightVector wv = qbc_weights(f, {1, 2, 3}, {{-1.0}, {1.0}, {2.0}});
  for (double w : wv.weights) CHECK(w == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("margin weight peaks at p = 0.5") {
  // w = 0, b = 0 makes every probability 0.5 -> uniform.
  const LogisticModel flat = raw_classifier(0.0, 0.0);
  const WeightVector u = margin_weights(flat, {1, 2}, {{-3.0}, {4.0}});
  CHECK(weight_of(u, 1) == doctest::Approx(0.5));

  // p(0) = 0.5 (raw 1), p(x1) = 0.75 (raw 0.5).
  const double x1 = std::log(3.0);  // sigmoid(log 3) = 0.75
  const LogisticModel m = raw_classifier(1.0, 0.0);
  const WeightVector wv = margin_weights(m, {1, 2}, {{0.0}, {x1}});
  CHECK(weight_of(wv, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(weight_of(wv, 2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("certain predictions keep a tiny floor weight") {
  // One point at p ~ 1, one at p = 0.5: the confident point's raw weight is
  // floored at 1e-6, not zero, so it remains reachable.
  const LogisticModel m = raw_classifier(50.0, 0.0);
  const WeightVector wv = margin_weights(m, {1, 2}, {{5.0}, {0.0}});
  const double certain = weight_of(wv, 1);
  CHECK(certain > 0.0);
  CHECK(certain == doctest::Approx(1e-6 / (1.0 + 1e-6)));
  CHECK(weight_of(wv, 2) == doctest::Approx(1.0 / (1.0 + 1e-6)));
}

TEST_CASE("accuracy strategy weights groups by 1 - accuracy") {
  const GroupMetrics gm =
      metrics_for({{0, 0.9}, {1, 0.6}}, {0.0, 0.0}, {0.0, 0.0});
  const std::vector<Point> pool = group_pool({0, 1});
  const WeightVector wv =
      group_weights(StrategyKind::AccuracyWeighted, gm, refs_of(pool));
  CHECK(weight_of(wv, 0) == doctest::Approx(0.2));
  CHECK(weight_of(wv, 1) == doctest::Approx(0.8));
}

TEST_CASE("mse strategy weights groups by their mse") {
  const GroupMetrics gm =
      metrics_for({{0, 1.0}, {1, 1.0}}, {0.3, 0.1}, {0.0, 0.0});
  const std::vector<Point> pool = group_pool({0, 1, 1});
  const WeightVector wv =
      group_weights(StrategyKind::MseWeighted, gm, refs_of(pool));
  CHECK(weight_of(wv, 0) == doctest::Approx(0.3 / 0.5));
  CHECK(weight_of(wv, 1) == doctest::Approx(0.1 / 0.5));
  CHECK(weight_of(wv, 2) == doctest::Approx(0.1 / 0.5));
}

TEST_CASE("disparity strategy weights groups by 1 - dp") {
  const GroupMetrics gm =
      metrics_for({{0, 1.0}, {1, 1.0}}, {0.0, 0.0}, {0.1, -0.2});
  const std::vector<Point> pool = group_pool({0, 1});
  const WeightVector wv =
      group_weights(StrategyKind::DisparityWeighted, gm, refs_of(pool));
  CHECK(weight_of(wv, 0) == doctest::Approx(0.9 / 2.1));
  CHECK(weight_of(wv, 1) == doctest::Approx(1.2 / 2.1));
}

TEST_CASE("same-group points get exactly equal weights") {
  const GroupMetrics gm =
      metrics_for({{0, 0.7}, {1, 0.4}}, {0.2, 0.9}, {0.05, -0.1});
  const std::vector<Point> pool = group_pool({0, 1, 0, 1, 0});
  for (StrategyKind kind :
       {StrategyKind::AccuracyWeighted, StrategyKind::MseWeighted,
        StrategyKind::DisparityWeighted}) {
    const WeightVector wv = group_weights(kind, gm, refs_of(pool));
    CHECK(weight_of(wv, 0) == weight_of(wv, 2));
    CHECK(weight_of(wv, 0) == weight_of(wv, 4));
    CHECK(weight_of(wv, 1) == weight_of(wv, 3));
  }
}

TEST_CASE("perfect groups fall back to uniform") {
  // 1 - accuracy is zero everywhere, so raw weights vanish.
  const GroupMetrics gm =
      metrics_for({{0, 1.0}, {1, 1.0}}, {0.0, 0.0}, {0.0, 0.0});
  const std::vector<Point> pool = group_pool({0, 1, 1});
  const WeightVector wv =
      group_weights(StrategyKind::AccuracyWeighted, gm, refs_of(pool));
  for (double w : wv.weights) CHECK(w == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a pool group with no holdout metric is an error") {
  const GroupMetrics gm = metrics_for({{0, 0.9}}, {0.1}, {0.0});
  const std::vector<Point> pool = group_pool({0, 2});
  CHECK_THROWS_AS(
      group_weights(StrategyKind::AccuracyWeighted, gm, refs_of(pool)),
      MissingGroupMetric);
}

TEST_CASE("sampling never repeats and exhausts the pool at k = n") {
  WeightVector wv;
  wv.ids = {1, 2, 3, 4, 5, 6, 7, 8};
  wv.weights = {0.3, 0.05, 0.05, 0.1, 0.2, 0.1, 0.1, 0.1};

  Rng rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::vector<std::int64_t> got =
        weighted_sample_without_replacement(wv, 5, rng);
    REQUIRE(got.size() == 5);
    const std::set<std::int64_t> unique(got.begin(), got.end());
    CHECK(unique.size() == 5);
  }

  const std::vector<std::int64_t> all =
      weighted_sample_without_replacement(wv, 8, rng);
  std::set<std::int64_t> unique(all.begin(), all.end());
  CHECK(unique.size() == 8);
}

TEST_CASE("a point-mass weight is always drawn first") {
  WeightVector wv;
  wv.ids = {10, 20, 30};
  wv.weights = {0.0, 1.0, 0.0};
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<std::int64_t> got =
        weighted_sample_without_replacement(wv, 1, rng);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == 20);
  }
  // Zero-weight leftovers still fill larger requests.
  const std::vector<std::int64_t> three =
      weighted_sample_without_replacement(wv, 3, rng);
  CHECK(three[0] == 20);
  CHECK(std::set<std::int64_t>(three.begin(), three.end()).size() == 3);
}

TEST_CASE("the first draw follows the weights within 3 sigma") {
  WeightVector wv;
  wv.ids = {0, 1, 2};
  wv.weights = {0.5, 0.3, 0.2};
  Rng rng(11);
  const int trials = 30000;
  std::map<std::int64_t, int> first_counts;
  for (int t = 0; t < trials; ++t) {
    first_counts[weighted_sample_without_replacement(wv, 1, rng)[0]] += 1;
  }
  for (std::size_t i = 0; i < wv.ids.size(); ++i) {
    const double p = wv.weights[i];
    const double sigma = std::sqrt(trials * p * (1.0 - p));
    CHECK(std::abs(first_counts[wv.ids[i]] - trials * p) < 3.0 * sigma);
  }
}

TEST_CASE("uniform inclusion frequency is binomial within 3 sigma") {
  const std::size_t n = 10, k = 3;
  WeightVector wv;
  for (std::size_t i = 0; i < n; ++i) {
    wv.ids.push_back(static_cast<std::int64_t>(i));
    wv.weights.push_back(1.0 / n);
  }
  Rng rng(19);
  const int trials = 20000;
  std::vector<int> included(n, 0);
  for (int t = 0; t < trials; ++t) {
    for (std::int64_t id : weighted_sample_without_replacement(wv, k, rng)) {
      ++included[static_cast<std::size_t>(id)];
    }
  }
  const double p = static_cast<double>(k) / n;
  const double sigma = std::sqrt(trials * p * (1.0 - p));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(included[i] - trials * p) < 3.0 * sigma);
  }
}

TEST_CASE("sampling requests beyond the pool are rejected") {
  WeightVector wv;
  wv.ids = {1, 2};
  wv.weights = {0.5, 0.5};
  Rng rng(1);
  CHECK_THROWS_AS(weighted_sample_without_replacement(wv, 3, rng),
                  ConfigError);
}
