#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acquisim/dataset.hpp"

namespace acquisim {

/// Node of a regression tree. feature < 0 marks a leaf holding `value`;
/// internal nodes route x[feature] <= threshold to `left`, else `right`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

/// Depth-limited CART regression tree. Leaves store the mean of the training
/// targets that reached them.
struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> features) const;
};

struct ForestHyperparams {
  int num_trees = 50;
  int max_depth = 10;
  int min_leaf = 5;
  int min_train_size = 10;
};

/// Bagged ensemble of regression trees over log-consumption. Each tree is fit
/// on a bootstrap resample of the canonical (ascending id) training list with
/// per-node random feature subsetting.
struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::int64_t> trained_on;  // canonical id list
  std::size_t dimensionality = 0;
  std::uint64_t seed = 0;
};

/// Fits a random forest regressor on log(consumption). The training set is
/// canonicalized by ascending id first, so any permutation of the same ids
/// yields an identical model for a fixed seed. Each tree's bootstrap and
/// feature-subset stream derives from (seed, tree_index). Throws
/// TrainingError when fewer than hp.min_train_size points are given.
ForestModel fit_forest(const PointRefs& points, const ForestHyperparams& hp,
                       std::uint64_t seed);

/// Ensemble predictions: the mean over per-tree outputs, in log-consumption
/// space. Throws ShapeError on feature-width mismatch.
std::vector<double> predict_forest(const ForestModel& model,
                                   const PointRefs& points);
std::vector<double> predict_forest(
    const ForestModel& model, const std::vector<std::vector<double>>& rows);

/// T x n matrix of per-tree predictions; row t is tree t, and the column mean
/// equals predict_forest.
std::vector<std::vector<double>> per_tree_predictions(const ForestModel& model,
                                                      const PointRefs& points);
std::vector<std::vector<double>> per_tree_predictions(
    const ForestModel& model, const std::vector<std::vector<double>>& rows);

}  // namespace acquisim
