#include "acquisim/pca.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>

#include "acquisim/errors.hpp"

namespace acquisim {

PcaTransform fit_pca(const PointRefs& points, std::size_t k) {
  if (points.size() < 2) {
    throw TrainingError("principal axes need at least 2 points");
  }
  const std::size_t n = points.size();
  const std::size_t d = points[0]->features.size();
  if (k == 0) {
    throw ConfigError("component count must be positive");
  }
  if (k > d) {
    throw ConfigError("component count exceeds feature dimensionality");
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i]->features.size() != d) {
      throw ShapeError("inconsistent feature width");
    }
    for (std::size_t j = 0; j < d; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          points[i]->features[j];
    }
  }

  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov =
      (x.transpose() * x) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw TrainingError("eigendecomposition failed");
  }
  // SelfAdjointEigenSolver returns eigenvalues ascending; take the top k.
  const Eigen::VectorXd evals = solver.eigenvalues();
  const Eigen::MatrixXd evecs = solver.eigenvectors();

  PcaTransform t;
  t.k = k;
  t.dimensionality = d;
  t.means.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    t.means[j] = mean(static_cast<Eigen::Index>(j));
  }
  t.components.resize(k, std::vector<double>(d));
  t.explained_variance.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - c);
    t.explained_variance[c] = evals(col);

    Eigen::Index max_row = 0;
    double max_abs = -1.0;
    for (Eigen::Index r = 0; r < evecs.rows(); ++r) {
      const double a = std::abs(evecs(r, col));
      if (a > max_abs) {
        max_abs = a;
        max_row = r;
      }
    }
    const double sign = evecs(max_row, col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      t.components[c][j] = sign * evecs(static_cast<Eigen::Index>(j), col);
    }
  }
  return t;
}

std::vector<double> transform_pca_row(const PcaTransform& transform,
                                      const std::vector<double>& features) {
  if (features.size() != transform.dimensionality) {
    throw ShapeError("feature width does not match projection");
  }
  std::vector<double> out(transform.k, 0.0);
  for (std::size_t c = 0; c < transform.k; ++c) {
    double acc = 0.0;
    const std::vector<double>& row = transform.components[c];
    for (std::size_t j = 0; j < features.size(); ++j) {
      acc += row[j] * (features[j] - transform.means[j]);
    }
    out[c] = acc;
  }
  return out;
}

std::vector<std::vector<double>> transform_pca(
    const PcaTransform& transform,
    const std::vector<std::vector<double>>& features_batch) {
  std::vector<std::vector<double>> out;
  out.reserve(features_batch.size());
  for (const std::vector<double>& row : features_batch) {
    out.push_back(transform_pca_row(transform, row));
  }
  return out;
}

}  // namespace acquisim
