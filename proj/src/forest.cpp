#include "acquisim/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acquisim/errors.hpp"
#include "acquisim/rng.hpp"

namespace acquisim {

namespace {

struct TreeBuilder {
  const std::vector<const Point*>& pts;  // canonical order
  const std::vector<double>& targets;    // log consumption, same order
  const ForestHyperparams& hp;
  std::size_t d;
  std::size_t n_candidates;
  Rng& rng;

  std::vector<int> sample;                        // bootstrap indices
  std::vector<std::pair<double, double>> scratch; // (feature value, target)
  std::vector<std::size_t> feature_pool;
  TreeModel tree;

  int make_leaf(int lo, int hi) {
    // Exact short-circuit keeps constant targets bit-exact.
    double first = targets[sample[lo]];
    bool all_equal = true;
    double sum = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double y = targets[sample[i]];
      all_equal = all_equal && y == first;
      sum += y;
    }
    TreeNode node;
    node.value = all_equal ? first : sum / static_cast<double>(hi - lo);
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  // Builds the subtree over sample[lo, hi) and returns its node index.
  int build(int lo, int hi, int depth) {
    const int m = hi - lo;
    if (depth >= hp.max_depth || m < 2 * hp.min_leaf || m < 2) {
      return make_leaf(lo, hi);
    }
    {
      const double first = targets[sample[lo]];
      bool all_equal = true;
      for (int i = lo + 1; i < hi; ++i) {
        if (targets[sample[i]] != first) {
          all_equal = false;
          break;
        }
      }
      if (all_equal) return make_leaf(lo, hi);
    }

    // Draw the candidate feature subset for this node (partial Fisher-Yates).
    for (std::size_t j = 0; j < d; ++j) feature_pool[j] = j;
    for (std::size_t c = 0; c < n_candidates; ++c) {
      const std::size_t pick = c + rng.uniform_index(d - c);
      std::swap(feature_pool[c], feature_pool[pick]);
    }

    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    double total_sum = 0.0, total_sumsq = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double y = targets[sample[i]];
      total_sum += y;
      total_sumsq += y * y;
    }
    const double parent_sse =
        total_sumsq - total_sum * total_sum / static_cast<double>(m);

    scratch.resize(static_cast<std::size_t>(m));
    for (std::size_t c = 0; c < n_candidates; ++c) {
      const std::size_t feat = feature_pool[c];
      for (int i = lo; i < hi; ++i) {
        const int s = sample[i];
        scratch[static_cast<std::size_t>(i - lo)] = {pts[s]->features[feat],
                                                     targets[s]};
      }
      std::sort(scratch.begin(), scratch.end());

      double left_sum = 0.0, left_sumsq = 0.0;
      for (int i = 1; i < m; ++i) {
        const double y = scratch[i - 1].second;
        left_sum += y;
        left_sumsq += y * y;
        if (scratch[i].first == scratch[i - 1].first) continue;
        if (i < hp.min_leaf || m - i < hp.min_leaf) continue;
        const double right_sum = total_sum - left_sum;
        const double right_sumsq = total_sumsq - left_sumsq;
        const double sse =
            (left_sumsq - left_sum * left_sum / i) +
            (right_sumsq - right_sum * right_sum / (m - i));
        const double gain = parent_sse - sse;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(feat);
          best_threshold = 0.5 * (scratch[i - 1].first + scratch[i].first);
        }
      }
    }

    if (best_feature < 0) return make_leaf(lo, hi);

    const auto mid_it = std::partition(
        sample.begin() + lo, sample.begin() + hi, [&](int s) {
          return pts[s]->features[static_cast<std::size_t>(best_feature)] <=
                 best_threshold;
        });
    const int mid = static_cast<int>(mid_it - sample.begin());
    if (mid == lo || mid == hi) return make_leaf(lo, hi);  // degenerate cut

    TreeNode node;
    node.feature = best_feature;
    node.threshold = best_threshold;
    tree.nodes.push_back(node);
    const int index = static_cast<int>(tree.nodes.size()) - 1;
    const int left = build(lo, mid, depth + 1);
    const int right = build(mid, hi, depth + 1);
    tree.nodes[index].left = left;
    tree.nodes[index].right = right;
    return index;
  }
};

}  // namespace

double TreeModel::predict(std::span<const double> features) const {
  int at = 0;
  while (nodes[at].feature >= 0) {
    const TreeNode& node = nodes[at];
    at = features[static_cast<std::size_t>(node.feature)] <= node.threshold
             ? node.left
             : node.right;
  }
  return nodes[at].value;
}

ForestModel fit_forest(const PointRefs& points, const ForestHyperparams& hp,
                       std::uint64_t seed) {
  if (hp.num_trees < 2) throw ConfigError("forest needs at least 2 trees");
  if (hp.max_depth < 0 || hp.min_leaf < 1) {
    throw ConfigError("invalid forest hyperparameters");
  }
  if (points.size() < static_cast<std::size_t>(hp.min_train_size)) {
    throw TrainingError("forest needs at least " +
                        std::to_string(hp.min_train_size) + " points, got " +
                        std::to_string(points.size()));
  }

  std::vector<const Point*> canonical(points.begin(), points.end());
  std::sort(canonical.begin(), canonical.end(),
            [](const Point* a, const Point* b) { return a->id < b->id; });

  const std::size_t n = canonical.size();
  const std::size_t d = canonical[0]->features.size();
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    targets[i] = std::log(canonical[i]->consumption);
  }

  ForestModel model;
  model.seed = seed;
  model.dimensionality = d;
  model.trained_on.reserve(n);
  for (const Point* p : canonical) model.trained_on.push_back(p->id);

  const std::size_t n_candidates = (d + 2) / 3;  // ceil(d / 3)
  model.trees.reserve(static_cast<std::size_t>(hp.num_trees));
  for (int t = 0; t < hp.num_trees; ++t) {
    Rng tree_rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    TreeBuilder builder{canonical, targets, hp, d, n_candidates, tree_rng,
                        {},        {},      {}, {}};
    builder.sample.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      builder.sample[i] = static_cast<int>(tree_rng.uniform_index(n));
    }
    builder.feature_pool.resize(d);
    builder.build(0, static_cast<int>(n), 0);
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

namespace {

template <typename RowAccess>
std::vector<std::vector<double>> per_tree_impl(const ForestModel& model,
                                               std::size_t count,
                                               RowAccess row) {
  for (std::size_t i = 0; i < count; ++i) {
    if (row(i).size() != model.dimensionality) {
      throw ShapeError("feature width " + std::to_string(row(i).size()) +
                       " does not match model dimensionality " +
                       std::to_string(model.dimensionality));
    }
  }
  std::vector<std::vector<double>> out(model.trees.size(),
                                       std::vector<double>(count));
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    for (std::size_t i = 0; i < count; ++i) {
      out[t][i] = model.trees[t].predict(row(i));
    }
  }
  return out;
}

std::vector<double> mean_over_trees(
    const std::vector<std::vector<double>>& per_tree) {
  const std::size_t count = per_tree.empty() ? 0 : per_tree[0].size();
  std::vector<double> mean(count, 0.0);
  // Incremental mean: exact when every tree agrees, so constant targets
  // predict without rounding drift.
  for (std::size_t t = 0; t < per_tree.size(); ++t) {
    const std::vector<double>& tree_row = per_tree[t];
    const double k = static_cast<double>(t + 1);
    for (std::size_t i = 0; i < count; ++i) {
      mean[i] += (tree_row[i] - mean[i]) / k;
    }
  }
  return mean;
}

}  // namespace

std::vector<std::vector<double>> per_tree_predictions(const ForestModel& model,
                                                      const PointRefs& points) {
  return per_tree_impl(model, points.size(), [&](std::size_t i) {
    return std::span<const double>(points[i]->features);
  });
}

std::vector<std::vector<double>> per_tree_predictions(
    const ForestModel& model, const std::vector<std::vector<double>>& rows) {
  return per_tree_impl(model, rows.size(), [&](std::size_t i) {
    return std::span<const double>(rows[i]);
  });
}

std::vector<double> predict_forest(const ForestModel& model,
                                   const PointRefs& points) {
  return mean_over_trees(per_tree_predictions(model, points));
}

std::vector<double> predict_forest(
    const ForestModel& model, const std::vector<std::vector<double>>& rows) {
  return mean_over_trees(per_tree_predictions(model, rows));
}

}  // namespace acquisim
