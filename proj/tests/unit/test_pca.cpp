#include <cmath>
#include <vector>

#include "acquisim/dataset.hpp"
#include "acquisim/errors.hpp"
#include "acquisim/pca.hpp"
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

std::vector<Point> correlated_cloud(std::size_t n, std::size_t d,
                                    std::uint64_t seed) {
  std::vector<Point> pts;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> f(d);
    const double base = rng.normal();
    for (std::size_t j = 0; j < d; ++j) {
      f[j] = (2.0 - 0.3 * j) * base + 0.5 * rng.normal();
    }
    pts.push_back({static_cast<std::int64_t>(i), 0, std::move(f), 1.0});
  }
  return pts;
}

// Population covariance of the feature matrix, built independently.
std::vector<std::vector<double>> covariance(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  const std::size_t d = pts[0].features.size();
  std::vector<double> mu(d, 0.0);
  for (const Point& p : pts) {
    for (std::size_t j = 0; j < d; ++j) mu[j] += p.features[j];
  }
  for (double& m : mu) m /= static_cast<double>(n);
  std::vector<std::vector<double>> c(d, std::vector<double>(d, 0.0));
  for (const Point& p : pts) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        c[a][b] += (p.features[a] - mu[a]) * (p.features[b] - mu[b]);
      }
    }
  }
  for (auto& row : c) {
    for (double& v : row) v /= static_cast<double>(n);
  }
  return c;
}

// Power iteration for the leading eigenpair; a deliberately different
// algorithm from the eigensolver the library uses.
std::pair<double, std::vector<double>> leading_eigenpair(
    const std::vector<std::vector<double>>& c) {
  const std::size_t d = c.size();
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double lambda = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    std::vector<double> w(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) w[a] += c[a][b] * v[b];
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : w) x /= norm;
    lambda = norm;
    v = w;
  }
  return {lambda, v};
}

}  // namespace

TEST_CASE("components are orthonormal") {
  const std::vector<Point> pts = correlated_cloud(120, 6, 4);
  const PcaTransform t = fit_pca(refs_of(pts), 4);
  REQUIRE(t.components.size() == 4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < 6; ++j) {
        dot += t.components[a][j] * t.components[b][j];
      }
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("the first component matches power iteration") {
  const std::vector<Point> pts = correlated_cloud(200, 5, 8);
  const PcaTransform t = fit_pca(refs_of(pts), 2);

  const auto [lambda, v] = leading_eigenpair(covariance(pts));
  double dot = 0.0;
  for (std::size_t j = 0; j < 5; ++j) dot += v[j] * t.components[0][j];
  CHECK(std::abs(std::abs(dot) - 1.0) < 1e-8);
  CHECK(t.explained_variance[0] == doctest::Approx(lambda).epsilon(1e-8));
  CHECK(t.explained_variance[0] >= t.explained_variance[1]);
}

TEST_CASE("sign convention puts the largest-magnitude entry positive") {
  const std::vector<Point> pts = correlated_cloud(150, 4, 15);
  const PcaTransform t = fit_pca(refs_of(pts), 4);
  for (const std::vector<double>& row : t.components) {
    double best = 0.0;
    for (double x : row) {
      if (std::abs(x) > std::abs(best)) best = x;
    }
    CHECK(best > 0.0);
  }
}

TEST_CASE("k = d preserves pairwise distances") {
  const std::vector<Point> pts = correlated_cloud(60, 5, 21);
  const PcaTransform t = fit_pca(refs_of(pts), 5);

  std::vector<std::vector<double>> rows;
  for (const Point& p : pts) rows.push_back(p.features);
  const std::vector<std::vector<double>> z = transform_pca(t, rows);

  for (std::size_t a = 0; a < pts.size(); a += 7) {
    for (std::size_t b = a + 1; b < pts.size(); b += 5) {
      double orig = 0.0, proj = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        const double dr = rows[a][j] - rows[b][j];
        const double dz = z[a][j] - z[b][j];
        orig += dr * dr;
        proj += dz * dz;
      }
      CHECK(std::abs(std::sqrt(orig) - std::sqrt(proj)) < 1e-8);
    }
  }
}

TEST_CASE("projected variance equals the reported eigenvalue") {
  const std::vector<Point> pts = correlated_cloud(150, 4, 33);
  const PcaTransform t = fit_pca(refs_of(pts), 2);
  std::vector<std::vector<double>> rows;
  for (const Point& p : pts) rows.push_back(p.features);
  const std::vector<std::vector<double>> z = transform_pca(t, rows);

  for (std::size_t comp = 0; comp < 2; ++comp) {
    double mean = 0.0;
    for (const auto& r : z) mean += r[comp];
    mean /= static_cast<double>(z.size());
    double var = 0.0;
    for (const auto& r : z) var += (r[comp] - mean) * (r[comp] - mean);
    var /= static_cast<double>(z.size());
    CHECK(var == doctest::Approx(t.explained_variance[comp]).epsilon(1e-8));
  }
}

TEST_CASE("transform_pca_row agrees with the batch transform") {
  const std::vector<Point> pts = correlated_cloud(50, 3, 44);
  const PcaTransform t = fit_pca(refs_of(pts), 2);
  std::vector<std::vector<double>> rows;
  for (const Point& p : pts) rows.push_back(p.features);
  const auto batch = transform_pca(t, rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(transform_pca_row(t, rows[i]) == batch[i]);
  }
}

TEST_CASE("bad shapes and ranks are rejected") {
  const std::vector<Point> pts = correlated_cloud(20, 3, 50);
  CHECK_THROWS_AS(fit_pca(refs_of(pts), 4), ConfigError);
  CHECK_THROWS_AS(fit_pca(refs_of(pts), 0), ConfigError);
  const PcaTransform t = fit_pca(refs_of(pts), 2);
  CHECK_THROWS_AS(transform_pca_row(t, {1.0, 2.0}), ShapeError);
}
