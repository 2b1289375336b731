#pragma once

#include <cstddef>
#include <vector>

#include "acquisim/dataset.hpp"

namespace acquisim {

// Centered linear projection onto the top-k principal axes.
struct PcaTransform {
  std::vector<std::vector<double>> components;  // k rows, each length d
  std::vector<double> means;                    // length d
  std::vector<double> explained_variance;       // descending, length k
  std::size_t k = 0;
  std::size_t dimensionality = 0;
};

// Top-k eigenvectors of the feature covariance matrix, descending by
// eigenvalue; each row's sign is fixed so its largest-magnitude entry is
// positive.
PcaTransform fit_pca(const PointRefs& points, std::size_t k);

std::vector<std::vector<double>> transform_pca(
    const PcaTransform& transform,
    const std::vector<std::vector<double>>& features_batch);

std::vector<double> transform_pca_row(const PcaTransform& transform,
                                      const std::vector<double>& features);

}  // namespace acquisim
