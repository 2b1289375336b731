#include "acquisim/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acquisim/errors.hpp"
#include "acquisim/rng.hpp"

namespace acquisim {

int cross_validate_depth(const PointRefs& points,
                         const ForestHyperparams& base_hyperparams,
                         const std::vector<int>& depth_grid, std::size_t folds,
                         std::uint64_t seed) {
  if (depth_grid.empty()) {
    throw ConfigError("depth grid is empty");
  }
  if (folds < 2) {
    throw ConfigError("cross-validation needs at least 2 folds");
  }
  if (points.size() < folds) {
    throw TrainingError("fewer points than folds");
  }

  PointRefs ordered = points;
  std::sort(ordered.begin(), ordered.end(),
            [](const Point* a, const Point* b) { return a->id < b->id; });

  std::vector<int> grid = depth_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (int depth : grid) {
    if (depth < 1) throw ConfigError("depth grid entries must be >= 1");
  }

  int best_depth = grid[0];
  double best_mse = std::numeric_limits<double>::infinity();

  for (int depth : grid) {
    ForestHyperparams hp = base_hyperparams;
    hp.max_depth = depth;

    double mse_sum = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      PointRefs train, validate;
      for (std::size_t i = 0; i < ordered.size(); ++i) {
        (i % folds == f ? validate : train).push_back(ordered[i]);
      }
      const ForestModel model =
          fit_forest(train, hp, derive_seed(seed, {static_cast<std::uint64_t>(f)}));
      const std::vector<double> preds = predict_forest(model, validate);
      double sq = 0.0;
      for (std::size_t i = 0; i < validate.size(); ++i) {
        const double r = std::log(validate[i]->consumption) - preds[i];
        sq += r * r;
      }
      mse_sum += sq / static_cast<double>(validate.size());
    }
    const double mean_mse = mse_sum / static_cast<double>(folds);
    if (mean_mse < best_mse) {
      best_mse = mean_mse;
      best_depth = depth;
    }
  }
  return best_depth;
}

}  // namespace acquisim
