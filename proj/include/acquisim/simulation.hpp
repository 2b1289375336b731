#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "acquisim/cross_validation.hpp"
#include "acquisim/dataset.hpp"
#include "acquisim/forest.hpp"
#include "acquisim/logistic.hpp"
#include "acquisim/metrics.hpp"
#include "acquisim/strategies.hpp"

namespace acquisim {

// Stream indices under the experiment master seed. Every random stream in an
// experiment is derive_seed'd from the master through one of these, so runs
// are reproducible from the single configured seed.
inline constexpr std::uint64_t kSplitStream = 1;
inline constexpr std::uint64_t kModelStream = 2;
inline constexpr std::uint64_t kSampleStream = 3;
inline constexpr std::uint64_t kBootstrapStream = 4;
inline constexpr std::uint64_t kSyntheticStream = 5;

// Budget checkpoints S_1 < ... < S_T with S_T = pool size.
struct Schedule {
  std::vector<std::size_t> sizes;
};

struct ScheduleParams {
  std::size_t num_points = 20;
  std::size_t min_size = 50;
};

struct SimulationConfig {
  StrategyKind strategy = StrategyKind::Uniform;
  std::size_t repetitions = 50;
  ScheduleParams schedule;
  ForestHyperparams forest;
  LogisticConfig logistic;
  PovertyThreshold threshold;
  double split_fraction = 0.75;
  std::uint64_t seed = 0;
  bool resplit_per_rep = false;
  std::optional<std::size_t> pca_k;
  std::vector<int> cv_grid;  // empty disables depth cross-validation
  std::size_t cv_folds = 3;
};

struct RunRecord {
  StrategyKind strategy = StrategyKind::Uniform;
  std::size_t repetition = 0;
  std::size_t budget = 0;  // S_t
  MetricsRecord metrics;   // all metrics missing when training failed
  std::uint64_t digest = 0;  // id_digest of the acquired set

  bool operator==(const RunRecord&) const = default;
};

struct MetricCi {
  std::optional<double> mean;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t n_missing = 0;

  bool operator==(const MetricCi&) const = default;
};

struct AggregateRecord {
  StrategyKind strategy = StrategyKind::Uniform;
  std::size_t budget = 0;
  std::array<MetricCi, kMetricNames.size()> metrics;

  bool operator==(const AggregateRecord&) const = default;
};

struct BootstrapCi {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Rounded exponential spacing from min_size to pool_size, deduplicated;
// the last entry is always exactly pool_size.
Schedule make_log_schedule(std::size_t pool_size, std::size_t num_points,
                           std::size_t min_size);

// FNV-1a (64-bit) over the ascending id list, 8 little-endian bytes per id.
std::uint64_t id_digest(std::vector<std::int64_t> ids);

// Called after each round with the record and the sorted acquired ids.
using RoundObserver =
    std::function<void(const RunRecord&, const std::vector<std::int64_t>&)>;

// One repetition of the incremental acquisition loop: round 1 draws
// uniformly (no model exists yet), later rounds weight the remaining pool
// with the previous round's fits, and every round trains on the full
// acquired set in ascending-id order and evaluates the holdout panel.
std::vector<RunRecord> run_single_simulation(const Dataset& dataset,
                                             const SplitSpec& split,
                                             const SimulationConfig& config,
                                             std::size_t rep_index,
                                             const RoundObserver* observer = nullptr);

// All repetitions for one strategy; `jobs` worker threads. Records are
// ordered by (repetition, round) regardless of scheduling.
std::vector<RunRecord> run_experiment(const Dataset& dataset,
                                      const SimulationConfig& config,
                                      std::size_t jobs = 1,
                                      const RoundObserver* observer = nullptr);

// Percentile interval from `b` resample means; nullopt when fewer than two
// values are given.
std::optional<BootstrapCi> bootstrap_ci(const std::vector<double>& values,
                                        std::size_t b, double level,
                                        std::uint64_t seed);

// Groups records by (strategy, budget) and bootstraps each metric over the
// repetition values; missing values are excluded and counted.
std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& records,
                                       std::size_t b, std::uint64_t seed);

}  // namespace acquisim
