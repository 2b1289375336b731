#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acquisim/dataset.hpp"
#include "acquisim/forest.hpp"

namespace acquisim {

// Picks the max_depth with the lowest mean validation MSE over `folds`
// disjoint folds; ties go to the smallest depth. Fold membership is index
// mod `folds` over the ascending-id order, so every depth sees the same
// partition, and fold f's forest seed derives from (seed, f) so every depth
// sees the same bootstrap streams.
int cross_validate_depth(const PointRefs& points,
                         const ForestHyperparams& base_hyperparams,
                         const std::vector<int>& depth_grid, std::size_t folds,
                         std::uint64_t seed);

}  // namespace acquisim
