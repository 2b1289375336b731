#include "acquisim/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "acquisim/errors.hpp"

namespace acquisim {

std::string strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Uniform: return "uniform";
    case StrategyKind::QueryByCommittee: return "qbc";
    case StrategyKind::MarginUncertainty: return "margin";
    case StrategyKind::AccuracyWeighted: return "accuracy";
    case StrategyKind::MseWeighted: return "mse";
    case StrategyKind::DisparityWeighted: return "disparity";
  }
  throw ConfigError("unknown strategy kind");
}

StrategyKind strategy_from_string(const std::string& name) {
  if (name == "uniform") return StrategyKind::Uniform;
  if (name == "qbc") return StrategyKind::QueryByCommittee;
  if (name == "margin") return StrategyKind::MarginUncertainty;
  if (name == "accuracy") return StrategyKind::AccuracyWeighted;
  if (name == "mse") return StrategyKind::MseWeighted;
  if (name == "disparity") return StrategyKind::DisparityWeighted;
  throw ConfigError("unknown strategy '" + name +
                    "' (expected uniform, qbc, margin, accuracy, mse, or "
                    "disparity)");
}

bool is_group_based(StrategyKind kind) {
  return kind == StrategyKind::AccuracyWeighted ||
         kind == StrategyKind::MseWeighted ||
         kind == StrategyKind::DisparityWeighted;
}

namespace {

// Normalizes raw nonnegative weights in place; an all-zero vector becomes
// uniform.
WeightVector finish(std::vector<std::int64_t> ids, std::vector<double> raw) {
  double total = 0.0;
  for (double w : raw) total += w;
  if (total <= 0.0) {
    const double u = 1.0 / static_cast<double>(raw.size());
    std::fill(raw.begin(), raw.end(), u);
  } else {
    for (double& w : raw) w /= total;
  }
  return WeightVector{std::move(ids), std::move(raw)};
}

std::vector<std::int64_t> extract_ids(const PointRefs& pool) {
  std::vector<std::int64_t> ids(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) ids[i] = pool[i]->id;
  return ids;
}

std::vector<std::vector<double>> extract_features(const PointRefs& pool) {
  std::vector<std::vector<double>> features(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    features[i] = pool[i]->features;
  }
  return features;
}

}  // namespace

WeightVector uniform_weights(const std::vector<std::int64_t>& pool_ids) {
  if (pool_ids.empty()) throw EmptyPool("no pool points to weight");
  const double u = 1.0 / static_cast<double>(pool_ids.size());
  return WeightVector{pool_ids, std::vector<double>(pool_ids.size(), u)};
}

WeightVector qbc_weights(const ForestModel& forest,
                         const std::vector<std::int64_t>& pool_ids,
                         const std::vector<std::vector<double>>& pool_features) {
  if (pool_ids.empty()) throw EmptyPool("no pool points to weight");
  if (pool_ids.size() != pool_features.size()) {
    throw ShapeError("pool ids and features differ in length");
  }
  const std::vector<std::vector<double>> per_tree =
      per_tree_predictions(forest, pool_features);
  const std::size_t t = per_tree.size();
  std::vector<double> raw(pool_ids.size(), 0.0);
  for (std::size_t i = 0; i < pool_ids.size(); ++i) {
    double mean = 0.0;
    for (std::size_t tree = 0; tree < t; ++tree) mean += per_tree[tree][i];
    mean /= static_cast<double>(t);
    double var = 0.0;
    for (std::size_t tree = 0; tree < t; ++tree) {
      const double d = per_tree[tree][i] - mean;
      var += d * d;
    }
    raw[i] = var / static_cast<double>(t);
  }
  return finish(pool_ids, std::move(raw));
}

WeightVector qbc_weights(const ForestModel& forest, const PointRefs& pool) {
  return qbc_weights(forest, extract_ids(pool), extract_features(pool));
}

WeightVector margin_weights(const LogisticModel& classifier,
                            const std::vector<std::int64_t>& pool_ids,
                            const std::vector<std::vector<double>>& pool_features) {
  if (pool_ids.empty()) throw EmptyPool("no pool points to weight");
  if (pool_ids.size() != pool_features.size()) {
    throw ShapeError("pool ids and features differ in length");
  }
  std::vector<double> raw(pool_ids.size());
  for (std::size_t i = 0; i < pool_ids.size(); ++i) {
    const double p = classifier.predict_proba(pool_features[i]);
    raw[i] = std::max(1.0 - 2.0 * std::abs(p - 0.5), kMarginFloor);
  }
  return finish(pool_ids, std::move(raw));
}

WeightVector margin_weights(const LogisticModel& classifier,
                            const PointRefs& pool) {
  return margin_weights(classifier, extract_ids(pool), extract_features(pool));
}

WeightVector group_weights(StrategyKind kind, const GroupMetrics& metrics,
                           const PointRefs& pool) {
  if (pool.empty()) throw EmptyPool("no pool points to weight");
  if (!is_group_based(kind)) {
    throw ConfigError("group weights require a group-based strategy");
  }

  // group index -> quantity; -1 marks declared-but-unmeasured groups.
  std::vector<double> quantity;
  std::vector<bool> measured;
  const auto ensure_slot = [&](std::size_t g) {
    if (g >= quantity.size()) {
      quantity.resize(g + 1, 0.0);
      measured.resize(g + 1, false);
    }
  };
  for (const GroupEntry& e : metrics.entries) {
    const auto g = static_cast<std::size_t>(e.group);
    ensure_slot(g);
    measured[g] = true;
    switch (kind) {
      case StrategyKind::AccuracyWeighted: quantity[g] = 1.0 - e.accuracy; break;
      case StrategyKind::MseWeighted: quantity[g] = e.mse; break;
      case StrategyKind::DisparityWeighted: quantity[g] = 1.0 - e.dp; break;
      default: break;
    }
  }

  std::vector<double> raw(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto g = static_cast<std::size_t>(pool[i]->group);
    if (g >= measured.size() || !measured[g]) {
      throw MissingGroupMetric("pool group " + std::to_string(pool[i]->group) +
                               " has no holdout metrics");
    }
    raw[i] = quantity[g];
  }
  return finish(extract_ids(pool), std::move(raw));
}

std::vector<std::int64_t> weighted_sample_without_replacement(
    const WeightVector& wv, std::size_t k, Rng& rng) {
  if (wv.ids.size() != wv.weights.size()) {
    throw ShapeError("weight vector ids and weights differ in length");
  }
  if (k < 1 || k > wv.ids.size()) {
    throw ConfigError("sample size outside [1, pool size]");
  }

  std::vector<std::int64_t> ids = wv.ids;
  std::vector<double> ws = wv.weights;
  std::vector<std::int64_t> drawn;
  drawn.reserve(k);

  for (std::size_t step = 0; step < k; ++step) {
    double total = 0.0;
    for (double w : ws) total += w;

    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.uniform_index(ids.size());
    } else {
      const double u = rng.uniform() * total;
      double cum = 0.0;
      pick = ids.size() - 1;  // guards against rounding at u ~ total
      for (std::size_t i = 0; i < ids.size(); ++i) {
        cum += ws[i];
        if (u < cum) {
          pick = i;
          break;
        }
      }
    }

    drawn.push_back(ids[pick]);
    ids[pick] = ids.back();
    ids.pop_back();
    ws[pick] = ws.back();
    ws.pop_back();
  }
  return drawn;
}

}  // namespace acquisim
