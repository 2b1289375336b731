#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acquisim/dataset.hpp"
#include "acquisim/forest.hpp"
#include "acquisim/logistic.hpp"
#include "acquisim/metrics.hpp"
#include "acquisim/rng.hpp"

namespace acquisim {

enum class StrategyKind {
  Uniform,
  QueryByCommittee,
  MarginUncertainty,
  AccuracyWeighted,
  MseWeighted,
  DisparityWeighted,
};

inline constexpr std::size_t kStrategyCount = 6;

// Config and output-file names for each kind.
std::string strategy_name(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& name);
bool is_group_based(StrategyKind kind);

// Acquisition distribution over the remaining unlabeled pool.
struct WeightVector {
  std::vector<std::int64_t> ids;
  std::vector<double> weights;  // nonnegative, sum 1
};

WeightVector uniform_weights(const std::vector<std::int64_t>& pool_ids);

// Raw weight = population variance of per-tree predictions; all-zero raw
// weights fall back to uniform.
WeightVector qbc_weights(const ForestModel& forest, const PointRefs& pool);
WeightVector qbc_weights(const ForestModel& forest,
                         const std::vector<std::int64_t>& pool_ids,
                         const std::vector<std::vector<double>>& pool_features);

// Raw weight = 1 - 2|p - 0.5|, floored at kMarginFloor before normalizing.
inline constexpr double kMarginFloor = 1e-6;
WeightVector margin_weights(const LogisticModel& classifier,
                            const PointRefs& pool);
WeightVector margin_weights(const LogisticModel& classifier,
                            const std::vector<std::int64_t>& pool_ids,
                            const std::vector<std::vector<double>>& pool_features);

// Raw weight per point is its group's quantity: 1-A_g, MSE_g, or 1-DP_g.
// Same-group points receive exactly equal weight; all-zero raw weights fall
// back to uniform. A pool group absent from `metrics` raises
// MissingGroupMetric.
WeightVector group_weights(StrategyKind kind, const GroupMetrics& metrics,
                           const PointRefs& pool);

// Sequential draw: pick proportional to remaining weights, remove, repeat.
// Once every positive-weight id is taken, remaining draws are uniform over
// the leftovers. Returns ids in draw order, no duplicates.
std::vector<std::int64_t> weighted_sample_without_replacement(
    const WeightVector& wv, std::size_t k, Rng& rng);

}  // namespace acquisim
