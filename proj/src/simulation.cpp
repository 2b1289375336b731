#include "acquisim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <utility>

#include "acquisim/errors.hpp"
#include "acquisim/pca.hpp"
#include "acquisim/rng.hpp"

namespace acquisim {

namespace {

// Distinguishes the depth-selection stream from the final fit's stream
// within one (rep, round).
constexpr std::uint64_t kCvTag = 0xCF;

void assert_disjoint(const PointRefs& train,
                     const std::unordered_set<std::int64_t>& holdout_ids) {
  for (const Point* p : train) {
    if (holdout_ids.count(p->id) != 0) {
      throw std::logic_error("training point belongs to the holdout set");
    }
  }
}

}  // namespace

Schedule make_log_schedule(std::size_t pool_size, std::size_t num_points,
                           std::size_t min_size) {
  if (min_size < 2) {
    throw ConfigError("schedule minimum must be at least 2");
  }
  if (pool_size <= min_size) {
    throw ConfigError("pool size must exceed the schedule minimum");
  }
  if (num_points < 2) {
    throw ConfigError("schedule needs at least 2 points");
  }

  const double lo = std::log(static_cast<double>(min_size));
  const double hi = std::log(static_cast<double>(pool_size));
  Schedule schedule;
  for (std::size_t i = 0; i < num_points; ++i) {
    const double f =
        static_cast<double>(i) / static_cast<double>(num_points - 1);
    const auto rounded = static_cast<std::size_t>(
        std::llround(std::exp(lo + f * (hi - lo))));
    const std::size_t s = std::min(rounded, pool_size);
    if (schedule.sizes.empty() || s > schedule.sizes.back()) {
      schedule.sizes.push_back(s);
    }
  }
  schedule.sizes.back() = pool_size;
  return schedule;
}

std::uint64_t id_digest(std::vector<std::int64_t> ids) {
  std::sort(ids.begin(), ids.end());
  std::uint64_t h = 14695981039346656037ull;
  for (std::int64_t id : ids) {
    const auto u = static_cast<std::uint64_t>(id);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xFFull;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::vector<RunRecord> run_single_simulation(const Dataset& dataset,
                                             const SplitSpec& split_spec,
                                             const SimulationConfig& config,
                                             std::size_t rep_index,
                                             const RoundObserver* observer) {
  const PointRefs pool_src = select_points(dataset, split_spec.pool_ids);
  const PointRefs holdout_src = select_points(dataset, split_spec.holdout_ids);
  const std::unordered_set<std::int64_t> holdout_ids(
      split_spec.holdout_ids.begin(), split_spec.holdout_ids.end());

  const Schedule schedule = make_log_schedule(
      pool_src.size(), config.schedule.num_points, config.schedule.min_size);

  // Working copies live in model space: a configured projection is fit once
  // per simulation on pool features (labels play no part in it), and every
  // fit and evaluation below runs on the projected copies.
  std::vector<Point> shadow_pool;
  std::vector<Point> shadow_holdout;
  PointRefs pool = pool_src;
  PointRefs holdout = holdout_src;
  if (config.pca_k) {
    const PcaTransform pca = fit_pca(pool_src, *config.pca_k);
    shadow_pool.reserve(pool_src.size());
    for (const Point* p : pool_src) {
      shadow_pool.push_back(Point{p->id, p->group,
                                  transform_pca_row(pca, p->features),
                                  p->consumption});
    }
    shadow_holdout.reserve(holdout_src.size());
    for (const Point* p : holdout_src) {
      shadow_holdout.push_back(Point{p->id, p->group,
                                     transform_pca_row(pca, p->features),
                                     p->consumption});
    }
    pool.clear();
    for (const Point& p : shadow_pool) pool.push_back(&p);
    holdout.clear();
    for (const Point& p : shadow_holdout) holdout.push_back(&p);
  }

  const std::uint64_t model_base = derive_seed(config.seed, {kModelStream});
  const std::uint64_t sample_base = derive_seed(config.seed, {kSampleStream});
  const auto rep = static_cast<std::uint64_t>(rep_index);

  PointRefs remaining = pool;  // ascending id, pool minus acquired
  PointRefs train;             // acquired, ascending id
  std::vector<std::int64_t> acquired_ids;

  // Fits from the previous round; empty means that round failed (or none
  // ran yet) and the next draw falls back to uniform weights.
  std::optional<ForestModel> forest_state;
  std::optional<LogisticModel> logistic_state;
  std::optional<GroupMetrics> group_state;

  std::vector<RunRecord> records;
  records.reserve(schedule.sizes.size());

  std::size_t previous_budget = 0;
  for (std::size_t t = 1; t <= schedule.sizes.size(); ++t) {
    const std::size_t budget = schedule.sizes[t - 1];
    const std::size_t need = budget - previous_budget;

    std::vector<std::int64_t> remaining_ids(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      remaining_ids[i] = remaining[i]->id;
    }

    WeightVector weights = uniform_weights(remaining_ids);
    if (t > 1) {
      switch (config.strategy) {
        case StrategyKind::Uniform:
          break;
        case StrategyKind::QueryByCommittee:
          if (forest_state) weights = qbc_weights(*forest_state, remaining);
          break;
        case StrategyKind::MarginUncertainty:
          if (logistic_state) {
            weights = margin_weights(*logistic_state, remaining);
          }
          break;
        default:
          if (group_state) {
            try {
              weights = group_weights(config.strategy, *group_state, remaining);
            } catch (const MissingGroupMetric&) {
              // a pool group has no holdout measurement: stay uniform
            }
          }
          break;
      }
    }

    Rng sampler(derive_seed(sample_base, {rep, t}));
    const std::vector<std::int64_t> drawn =
        weighted_sample_without_replacement(weights, need, sampler);

    const std::unordered_set<std::int64_t> drawn_set(drawn.begin(),
                                                     drawn.end());
    PointRefs still;
    still.reserve(remaining.size() - drawn.size());
    for (const Point* p : remaining) {
      if (drawn_set.count(p->id) != 0) {
        train.push_back(p);
      } else {
        still.push_back(p);
      }
    }
    remaining.swap(still);
    std::sort(train.begin(), train.end(),
              [](const Point* a, const Point* b) { return a->id < b->id; });
    acquired_ids.insert(acquired_ids.end(), drawn.begin(), drawn.end());

    RunRecord record;
    record.strategy = config.strategy;
    record.repetition = rep_index;
    record.budget = budget;
    record.digest = id_digest(acquired_ids);

    forest_state.reset();
    logistic_state.reset();
    group_state.reset();
    try {
      assert_disjoint(train, holdout_ids);
      ForestHyperparams hp = config.forest;
      if (!config.cv_grid.empty()) {
        hp.max_depth = cross_validate_depth(
            train, config.forest, config.cv_grid, config.cv_folds,
            derive_seed(model_base, {rep, t, kCvTag}));
      }
      ForestModel forest =
          fit_forest(train, hp, derive_seed(model_base, {rep, t}));
      const std::vector<double> preds = predict_forest(forest, holdout);
      record.metrics =
          evaluate_panel(holdout, preds, config.threshold, dataset.groups);
      group_state = record.metrics.groups;
      forest_state = std::move(forest);
      if (config.strategy == StrategyKind::MarginUncertainty) {
        try {
          logistic_state = fit_logistic(train, config.threshold, config.logistic);
        } catch (const DegenerateLabels&) {
          // single-class batch: the next round draws uniformly
        } catch (const TrainingError&) {
          // solver failure: same fallback
        }
      }
    } catch (const TrainingError&) {
      // budget below the trainable minimum: metrics stay missing and the
      // loop continues with the acquired set intact
    }

    if (observer != nullptr) {
      std::vector<std::int64_t> sorted = acquired_ids;
      std::sort(sorted.begin(), sorted.end());
      (*observer)(record, sorted);
    }
    records.push_back(std::move(record));
    previous_budget = budget;
  }
  return records;
}

std::vector<RunRecord> run_experiment(const Dataset& dataset,
                                      const SimulationConfig& config,
                                      std::size_t jobs,
                                      const RoundObserver* observer) {
  if (config.repetitions < 1) {
    throw ConfigError("repetitions must be at least 1");
  }
  if (jobs < 1) jobs = 1;

  const std::uint64_t split_seed = derive_seed(config.seed, {kSplitStream});
  SplitSpec shared_split;
  if (!config.resplit_per_rep) {
    shared_split = split(dataset, config.split_fraction, split_seed);
  }

  std::vector<std::vector<RunRecord>> per_rep(config.repetitions);

  std::mutex observer_mutex;
  RoundObserver locked_observer;
  const RoundObserver* worker_observer = nullptr;
  if (observer != nullptr) {
    locked_observer = [&](const RunRecord& r,
                          const std::vector<std::int64_t>& ids) {
      const std::scoped_lock lock(observer_mutex);
      (*observer)(r, ids);
    };
    worker_observer = &locked_observer;
  }

  std::atomic<std::size_t> next_rep{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto work = [&]() {
    for (;;) {
      if (failed.load()) return;
      const std::size_t rep = next_rep.fetch_add(1);
      if (rep >= config.repetitions) return;
      try {
        SplitSpec local;
        const SplitSpec* chosen = &shared_split;
        if (config.resplit_per_rep) {
          local = split(dataset, config.split_fraction,
                        derive_seed(split_seed, {static_cast<std::uint64_t>(rep)}));
          chosen = &local;
        }
        per_rep[rep] =
            run_single_simulation(dataset, *chosen, config, rep, worker_observer);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const std::size_t workers = std::min(jobs, config.repetitions);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(work);
    for (std::thread& th : threads) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<RunRecord> records;
  for (std::vector<RunRecord>& chunk : per_rep) {
    for (RunRecord& r : chunk) records.push_back(std::move(r));
  }
  return records;
}

std::optional<BootstrapCi> bootstrap_ci(const std::vector<double>& values,
                                        std::size_t b, double level,
                                        std::uint64_t seed) {
  if (b < 100) {
    throw ConfigError("bootstrap needs at least 100 resamples");
  }
  if (level <= 0.0 || level >= 1.0) {
    throw ConfigError("confidence level must lie strictly between 0 and 1");
  }
  if (values.size() < 2) return std::nullopt;

  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  Rng rng(seed);
  std::vector<double> means(b);
  for (std::size_t i = 0; i < b; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += values[rng.uniform_index(n)];
    means[i] = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  const auto percentile = [&](double p) {
    const double h = static_cast<double>(b - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= b) return means[b - 1];
    const double frac = h - static_cast<double>(lo);
    return means[lo] + frac * (means[lo + 1] - means[lo]);
  };
  const double tail = (1.0 - level) / 2.0;
  return BootstrapCi{mean, percentile(tail), percentile(1.0 - tail)};
}

std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& records,
                                       std::size_t b, std::uint64_t seed) {
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const RunRecord& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunRecord* x, const RunRecord* y) {
                     return std::make_tuple(static_cast<int>(x->strategy),
                                            x->repetition, x->budget) <
                            std::make_tuple(static_cast<int>(y->strategy),
                                            y->repetition, y->budget);
                   });

  std::map<std::pair<int, std::size_t>, std::vector<const RunRecord*>> groups;
  for (const RunRecord* r : sorted) {
    groups[{static_cast<int>(r->strategy), r->budget}].push_back(r);
  }

  std::vector<AggregateRecord> out;
  out.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    AggregateRecord agg;
    agg.strategy = static_cast<StrategyKind>(key.first);
    agg.budget = key.second;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const RunRecord* r : members) {
        if (const std::optional<double> v = panel_metric(r->metrics, m)) {
          values.push_back(*v);
        }
      }
      MetricCi ci;
      ci.n_missing = members.size() - values.size();
      if (values.size() == 1) {
        ci.mean = ci.ci_low = ci.ci_high = values[0];
      } else if (values.size() >= 2) {
        const std::optional<BootstrapCi> bs = bootstrap_ci(
            values, b, 0.95,
            derive_seed(seed, {static_cast<std::uint64_t>(key.first),
                               static_cast<std::uint64_t>(key.second),
                               static_cast<std::uint64_t>(m)}));
        ci.mean = bs->mean;
        ci.ci_low = bs->ci_low;
        ci.ci_high = bs->ci_high;
      }
      agg.metrics[m] = ci;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace acquisim
